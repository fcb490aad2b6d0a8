#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "l1e/analysis.hpp"
#include "l1e/simulator.hpp"

namespace l1e {

/// 17 significant digits: enough for double -> text -> double round trips.
inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Writes through a temporary file and renames into place, so a failed or
/// interrupted operation never leaves a partial output behind.
inline void atomic_write_text(const std::filesystem::path& path, const std::string& text) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// trace CSV

inline std::string trace_csv(const RunOutcome& run) {
  const Trace& tr = run.trace;
  std::ostringstream out;
  out << "# verdict=" << to_string(run.verdict);
  if (run.verdict == Verdict::Diverged)
    out << " t=" << fmt17(run.t_diverged) << " cause=" << tr.cause;
  out << '\n';

  out << 't';
  for (std::size_t i = 1; i <= tr.n; ++i) out << ",x" << i;
  out << ",u";
  for (std::size_t i = 1; i <= tr.n; ++i) out << ",xhat" << i;
  for (std::size_t i = 1; i <= tr.n; ++i) out << ",thhat" << i;
  out << ",ttx,V,norminf\n";

  for (std::size_t s = 0; s < tr.samples(); ++s) {
    out << fmt17(tr.t[s]);
    for (std::size_t i = 0; i < tr.n; ++i) out << ',' << fmt17(tr.x[i][s]);
    out << ',' << fmt17(tr.u[s]);
    for (std::size_t i = 0; i < tr.n; ++i) out << ',' << fmt17(tr.xhat[i][s]);
    for (std::size_t i = 0; i < tr.n; ++i) out << ',' << fmt17(tr.thhat[i][s]);
    out << ',' << fmt17(tr.ttx[s]) << ',' << fmt17(tr.v_lyap[s]) << ',' << fmt17(tr.norminf[s])
        << '\n';
  }
  return out.str();
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace detail

/// Re-parses a trace CSV (comment lines allowed before the header).
inline Trace parse_trace_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line) && (line.empty() || line[0] == '#')) {
  }
  const auto header = detail::split_csv_line(line);
  if (header.empty() || header[0] != "t")
    throw std::runtime_error("parse_trace_csv: missing header row");
  std::size_t n = 0;
  while (1 + n < header.size() && header[1 + n] == "x" + std::to_string(n + 1)) ++n;
  if (header.size() != 3 * n + 5) throw std::runtime_error("parse_trace_csv: malformed header");

  Trace tr;
  tr.n = n;
  tr.x.resize(n);
  tr.xhat.resize(n);
  tr.thhat.resize(n);
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto cells = detail::split_csv_line(line);
    if (cells.size() != header.size()) throw std::runtime_error("parse_trace_csv: ragged row");
    std::size_t c = 0;
    tr.t.push_back(std::stod(cells[c++]));
    for (std::size_t i = 0; i < n; ++i) tr.x[i].push_back(std::stod(cells[c++]));
    tr.u.push_back(std::stod(cells[c++]));
    for (std::size_t i = 0; i < n; ++i) tr.xhat[i].push_back(std::stod(cells[c++]));
    for (std::size_t i = 0; i < n; ++i) tr.thhat[i].push_back(std::stod(cells[c++]));
    tr.ttx.push_back(std::stod(cells[c++]));
    tr.v_lyap.push_back(std::stod(cells[c++]));
    tr.norminf.push_back(std::stod(cells[c++]));
  }
  return tr;
}

// ---------------------------------------------------------------------------
// flat key-value reports

/// Ordered key = value lines; doubles printed with 17 significant digits.
class KvReport {
 public:
  void add(std::string_view key, double v) { lines_.emplace_back(key, fmt17(v)); }
  void add(std::string_view key, bool v) { lines_.emplace_back(key, v ? "true" : "false"); }
  void add(std::string_view key, std::string_view v) { lines_.emplace_back(key, std::string(v)); }
  void add(std::string_view key, const char* v) { lines_.emplace_back(key, v); }
  void add(std::string_view key, std::size_t v) { lines_.emplace_back(key, std::to_string(v)); }
  void add(std::string_view key, const Polynomial& p) {
    std::string s;
    for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
      if (i) s += ' ';
      s += fmt17(p.coeff(i));
    }
    lines_.emplace_back(key, s);
  }

  std::string to_string() const {
    std::string out;
    for (const auto& [k, v] : lines_) {
      out += k;
      out += " = ";
      out += v;
      out += '\n';
    }
    return out;
  }

 private:
  std::vector<std::pair<std::string, std::string>> lines_;
};

// ---------------------------------------------------------------------------
// sweep grid CSV

inline char verdict_code(Verdict v) { return v == Verdict::Completed ? 'C' : 'D'; }

inline char stability_code(StabilityTag t) {
  switch (t) {
    case StabilityTag::Hurwitz: return 'H';
    case StabilityTag::Marginal: return 'M';
    default: return 'U';
  }
}

/// Rows are k values, columns gamma values; cells C (completed) or
/// D (diverged). The pi column holds the analytic verdict H/M/U per k.
inline std::string sweep_csv(const SweepResult& res) {
  std::ostringstream out;
  out << "k,pi";
  for (double g : res.gamma_grid) out << ",gamma=" << fmt17(g);
  out << '\n';
  for (std::size_t ik = 0; ik < res.k_grid.size(); ++ik) {
    out << fmt17(res.k_grid[ik]) << ',' << stability_code(res.pi_verdicts[ik]);
    for (std::size_t ig = 0; ig < res.gamma_grid.size(); ++ig)
      out << ',' << verdict_code(res.l1_at(ik, ig));
    out << '\n';
  }
  return out.str();
}

}  // namespace l1e
