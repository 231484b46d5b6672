#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "pentapack/error.hpp"
#include "pentapack/fourier.hpp"
#include "pentapack/sdp.hpp"

namespace pentapack {
namespace {

struct FileEntry {
  int matrix;  // 0 = objective, i = constraint i
  MatrixEntry e;
};

void append_entries(std::vector<FileEntry>& out, int matrix, const SparseSymmetric& a, double scale) {
  SparseSymmetric sorted = a;
  canonicalize(sorted);
  for (auto e : sorted) {
    e.value *= scale;
    out.push_back({matrix, e});
  }
}

// SDPA allows ,(){} as separators.
std::string normalize_separators(std::string line) {
  for (char& c : line) {
    if (c == ',' || c == '(' || c == ')' || c == '{' || c == '}') c = ' ';
  }
  return line;
}

template <class T>
T read_value(std::istringstream& in, const char* what) {
  T v{};
  if (!(in >> v)) throw MalformedFile(std::string("sdpa: expected ") + what);
  return v;
}

double parse_number(const std::string& tok) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw MalformedFile("sdpa: bad number '" + tok + "'");
  }
  if (used != tok.size()) throw MalformedFile("sdpa: bad number '" + tok + "'");
  return v;
}

}  // namespace

std::string export_sdpa(const StandardSdp& p) {
  std::ostringstream os;
  os << p.constraints.size() << '\n' << p.blocks.size() << '\n';
  for (std::size_t k = 0; k < p.blocks.size(); ++k) {
    if (k) os << ' ';
    os << (p.blocks[k].kind == BlockKind::diagonal ? -p.blocks[k].dim : p.blocks[k].dim);
  }
  os << '\n';
  for (std::size_t i = 0; i < p.rhs.size(); ++i) {
    if (i) os << ' ';
    os << format_double(p.rhs[i]);
  }
  os << '\n';
  std::vector<FileEntry> entries;
  append_entries(entries, 0, p.objective, -1.0);
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    append_entries(entries, static_cast<int>(i) + 1, p.constraints[i], 1.0);
  }
  for (const auto& fe : entries) {
    os << fe.matrix << ' ' << fe.e.block + 1 << ' ' << fe.e.row + 1 << ' ' << fe.e.col + 1 << ' '
       << format_double(fe.e.value == 0.0 ? 0.0 : fe.e.value) << '\n';
  }
  return os.str();
}

std::string export_sdpa(const SdpProblem& p) { return export_sdpa(to_standard(p)); }

StandardSdp parse_sdpa(const std::string& text) {
  std::istringstream lines(text);
  std::string line;
  std::string body;
  bool header_done = false;
  while (std::getline(lines, line)) {
    if (!header_done) {
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      if (line[first] == '"' || line[first] == '*') continue;
      header_done = true;
    }
    body += normalize_separators(line);
    body += '\n';
  }
  std::istringstream in(body);
  StandardSdp p;
  const long m = read_value<long>(in, "constraint count");
  const long nblocks = read_value<long>(in, "block count");
  if (m < 0 || nblocks < 0) throw MalformedFile("sdpa: negative counts");
  for (long k = 0; k < nblocks; ++k) {
    const long dim = read_value<long>(in, "block size");
    if (dim == 0) throw MalformedFile("sdpa: zero block size");
    p.blocks.push_back(BlockSpec{"B" + std::to_string(k + 1), static_cast<int>(std::labs(dim)),
                                 dim < 0 ? BlockKind::diagonal : BlockKind::psd});
  }
  for (long i = 0; i < m; ++i) p.rhs.push_back(parse_number(read_value<std::string>(in, "right-hand side")));
  p.constraints.resize(m);
  std::string tok;
  while (in >> tok) {
    long mat = 0;
    const auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), mat);
    if (ec != std::errc() || end != tok.data() + tok.size()) throw MalformedFile("sdpa: bad matrix index '" + tok + "'");
    const long blk = read_value<long>(in, "block index");
    const long i = read_value<long>(in, "row index");
    const long j = read_value<long>(in, "column index");
    const double v = parse_number(read_value<std::string>(in, "entry value"));
    if (mat < 0 || mat > m) throw MalformedFile("sdpa: matrix index out of range");
    if (blk < 1 || blk > nblocks) throw MalformedFile("sdpa: block index out of range");
    const BlockSpec& spec = p.blocks[blk - 1];
    if (i < 1 || j < 1 || i > spec.dim || j > spec.dim) throw MalformedFile("sdpa: entry index out of range");
    if (spec.kind == BlockKind::diagonal && i != j) throw MalformedFile("sdpa: off-diagonal entry in diagonal block");
    MatrixEntry e{static_cast<int>(blk - 1), static_cast<int>(std::min(i, j) - 1), static_cast<int>(std::max(i, j) - 1),
                  v};
    if (mat == 0) {
      e.value = -v;
      p.objective.push_back(e);
    } else {
      p.constraints[mat - 1].push_back(e);
    }
  }
  canonicalize(p.objective);
  for (auto& c : p.constraints) canonicalize(c);
  return p;
}

std::string export_solution(const SdpSolution& s) {
  std::ostringstream os;
  os << "* primal_objective " << format_double(s.primal_objective) << '\n';
  os << "* dual_objective " << format_double(s.dual_objective) << '\n';
  os << "* status " << to_string(s.status) << '\n';
  for (int i = 0; i < s.y.size(); ++i) {
    if (i) os << ' ';
    os << format_double(s.y[i]);
  }
  os << '\n';
  auto dump = [&](int matno, const BlockMatrix& m) {
    for (std::size_t b = 0; b < m.blocks.size(); ++b) {
      const Eigen::MatrixXd& blk = m.blocks[b];
      if (blk.cols() == 1) {
        for (int i = 0; i < blk.rows(); ++i) {
          if (blk(i, 0) != 0.0) os << matno << ' ' << b + 1 << ' ' << i + 1 << ' ' << i + 1 << ' ' << format_double(blk(i, 0)) << '\n';
        }
      } else {
        for (int i = 0; i < blk.rows(); ++i)
          for (int j = i; j < blk.cols(); ++j)
            if (blk(i, j) != 0.0) os << matno << ' ' << b + 1 << ' ' << i + 1 << ' ' << j + 1 << ' ' << format_double(blk(i, j)) << '\n';
      }
    }
  };
  dump(1, s.z);
  dump(2, s.x);
  return os.str();
}

SdpSolution import_solution(const std::string& text, const StandardSdp& p) {
  SdpSolution s;
  s.blocks = p.blocks;
  s.x = BlockMatrix::zeros(p.blocks);
  s.z = BlockMatrix::zeros(p.blocks);
  s.status = SolverStatus::optimal;
  std::istringstream lines(text);
  std::string line;
  bool have_y = false;
  bool have_objective = false;
  std::vector<std::vector<std::pair<int, int>>> seen;
  while (std::getline(lines, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '*') {
      std::istringstream in(line.substr(first + 1));
      std::string key, value;
      in >> key >> value;
      if (key == "primal_objective") {
        s.primal_objective = parse_number(value);
        have_objective = true;
      } else if (key == "dual_objective") {
        s.dual_objective = parse_number(value);
      } else if (key == "status") {
        if (value == "near-optimal") s.status = SolverStatus::near_optimal;
        else if (value == "infeasible") s.status = SolverStatus::infeasible;
        else if (value == "numerical-failure") s.status = SolverStatus::numerical_failure;
      }
      continue;
    }
    std::istringstream in(normalize_separators(line));
    if (!have_y) {
      std::vector<double> y;
      std::string tok;
      while (in >> tok) y.push_back(parse_number(tok));
      if (y.size() < p.constraints.size()) throw MalformedFile("solution: truncated dual vector");
      if (y.size() != p.constraints.size()) {
        throw DimensionMismatch("solution: dual vector has " + std::to_string(y.size()) + " entries, expected " +
                                std::to_string(p.constraints.size()));
      }
      s.y = Eigen::Map<Eigen::VectorXd>(y.data(), static_cast<long>(y.size()));
      have_y = true;
      continue;
    }
    long mat = 0, blk = 0, i = 0, j = 0;
    std::string tok;
    if (!(in >> mat >> blk >> i >> j >> tok)) throw MalformedFile("solution: truncated entry line");
    const double v = parse_number(tok);
    if (mat != 1 && mat != 2) throw MalformedFile("solution: matrix number must be 1 or 2");
    if (blk < 1 || blk > static_cast<long>(p.blocks.size())) throw DimensionMismatch("solution: block out of range");
    const BlockSpec& spec = p.blocks[blk - 1];
    if (i < 1 || j < 1 || i > spec.dim || j > spec.dim) throw DimensionMismatch("solution: entry outside block");
    Eigen::MatrixXd& target = (mat == 1 ? s.z : s.x).blocks[blk - 1];
    if (spec.kind == BlockKind::diagonal) {
      if (i != j) throw MalformedFile("solution: off-diagonal entry in diagonal block");
      target(i - 1, 0) = v;
    } else {
      target(i - 1, j - 1) = v;
      target(j - 1, i - 1) = v;
    }
  }
  if (!have_y) throw MalformedFile("solution: missing dual vector");
  for (std::size_t b = 0; b < p.blocks.size(); ++b) {
    if (p.blocks[b].kind == BlockKind::psd) {
      s.x.blocks[b] = 0.5 * (s.x.blocks[b] + s.x.blocks[b].transpose()).eval();
      s.z.blocks[b] = 0.5 * (s.z.blocks[b] + s.z.blocks[b].transpose()).eval();
    }
  }
  const double recomputed = inner(p.objective, s.x);
  if (!have_objective) s.primal_objective = recomputed;
  double b_dot_y = 0.0;
  for (std::size_t i = 0; i < p.rhs.size(); ++i) b_dot_y += p.rhs[i] * s.y[static_cast<long>(i)];
  if (s.dual_objective == 0.0) s.dual_objective = b_dot_y;
  const Eigen::VectorXd r = primal_residual(p, s.x);
  double bmax = 0.0;
  for (double v : p.rhs) bmax = std::max(bmax, std::abs(v));
  s.primal_infeasibility = (r.size() ? r.cwiseAbs().maxCoeff() : 0.0) / (1.0 + bmax);
  return s;
}

}  // namespace pentapack
