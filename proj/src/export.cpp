#include "hxrl/export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "hxrl/errors.hpp"

namespace hxrl {

namespace {

std::string fixed6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

unsigned char gray_level(double p) { return static_cast<unsigned char>(std::lround(255.0 * std::clamp(p, 0.0, 1.0))); }

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_csv(std::ostream& out, const SuccessMatrix& p, const CountMatrix* visits) {
  if (visits && !visits->same_shape(CountMatrix(p.num_states())))
    throw DomainError("visit counts do not match the probability matrix");
  out << "state,up,down,left,right";
  if (visits) out << ",visits_up,visits_down,visits_left,visits_right";
  out << '\n';
  for (StateId s = 0; s < p.num_states(); ++s) {
    out << s;
    for (double v : p.row(s)) out << ',' << fixed6(v);
    if (visits)
      for (auto c : visits->row(s)) out << ',' << c;
    out << '\n';
  }
}

void write_pgm(std::ostream& out, const SuccessMatrix& p) {
  out << "P5\n" << kNumActions << ' ' << p.num_states() << "\n255\n";
  for (double v : p.flat()) out.put(static_cast<char>(gray_level(v)));
}

void write_svg(std::ostream& out, const SuccessMatrix& p, const std::string& title) {
  constexpr int cell_w = 48;
  constexpr int cell_h = 12;
  constexpr int left = 40;
  constexpr int top = 44;
  const int width = left + cell_w * kNumActions + 10;
  const int height = top + cell_h * p.num_states() + 10;

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"9\">\n";
  out << "<title>" << xml_escape(title) << "</title>\n";
  out << "<text x=\"" << left << "\" y=\"14\" font-size=\"12\">" << xml_escape(title) << "</text>\n";
  for (Action a : kAllActions)
    out << "<text x=\"" << left + cell_w * index(a) + cell_w / 2 << "\" y=\"" << top - 6
        << "\" text-anchor=\"middle\">" << action_name(a) << "</text>\n";
  for (StateId s = 0; s < p.num_states(); ++s) {
    const int y = top + cell_h * s;
    out << "<text x=\"" << left - 4 << "\" y=\"" << y + cell_h - 3 << "\" text-anchor=\"end\">" << s << "</text>\n";
    for (Action a : kAllActions) {
      const int g = gray_level(p.at(s, a));
      out << "<rect x=\"" << left + cell_w * index(a) << "\" y=\"" << y << "\" width=\"" << cell_w << "\" height=\""
          << cell_h << "\" fill=\"rgb(" << g << ',' << g << ',' << g << ")\"><title>state " << s << ' '
          << action_name(a) << ": " << fixed6(p.at(s, a)) << "</title></rect>\n";
    }
  }
  out << "</svg>\n";
}

}  // namespace hxrl
