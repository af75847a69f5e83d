#include "looptree/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace looptree {

std::vector<double> parse_law_table(std::istream& in) {
  std::vector<double> probs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string token = line.substr(first, last - first + 1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size() || v < 0.0)
      throw std::invalid_argument("law table line " + std::to_string(line_no) + ": expected a probability, got '" +
                                  token + "'");
    probs.push_back(v);
  }
  if (probs.empty()) throw std::invalid_argument("law table is empty");
  return probs;
}

std::vector<double> read_law_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open law table " + path);
  return parse_law_table(in);
}

std::string kind_name(VertexKind kind) {
  switch (kind) {
    case VertexKind::Closed: return "closed";
    case VertexKind::Open: return "open";
    case VertexKind::Outgrowth: return "outgrowth";
  }
  return "?";
}

void write_ball(std::ostream& out, const LoopspineBall& ball, std::uint64_t seed) {
  out << "# looptree ball R=" << ball.radius << " seed=" << seed << "\n";
  for (const auto& e : ball.graph.edge_list()) out << e.u << ' ' << e.v << ' ' << e.multiplicity << "\n";
  out << "# vertices\n";
  for (std::size_t v = 0; v < ball.size(); ++v)
    out << v << ' ' << ball.vertices[v].distance << ' ' << kind_name(ball.vertices[v].kind) << "\n";
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

}  // namespace looptree
