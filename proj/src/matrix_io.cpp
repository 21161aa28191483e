#include <fstream>
#include <sstream>

#include "dencomb/covariance.hpp"
#include "dencomb/format.hpp"
#include "dencomb/simplex.hpp"

namespace dencomb {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::oracle: return "oracle";
    case Provenance::estimated: return "estimated";
    case Provenance::repaired: return "repaired";
  }
  return "?";
}

const char* to_string(SolverId id) {
  switch (id) {
    case SolverId::frank_wolfe: return "frank_wolfe";
    case SolverId::projected_gradient: return "projected_gradient";
    case SolverId::closed_form_relaxed: return "closed_form_relaxed";
    case SolverId::closed_form_2way: return "closed_form_2way";
  }
  return "?";
}

SolverId solver_from_string(const std::string& name) {
  for (auto id : {SolverId::frank_wolfe, SolverId::projected_gradient, SolverId::closed_form_relaxed,
                  SolverId::closed_form_2way}) {
    if (name == to_string(id)) return id;
  }
  throw InvalidParameter("unknown solver '" + name + "'");
}

void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw ShapeError("write_matrix: matrix is not square");
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << m.rows() << "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? " " : "") << fmt17(m(i, j));
    out << "\n";
  }
}

Eigen::MatrixXd read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  long k = 0;
  if (!(in >> k) || k <= 0) throw ParseError(path.string() + ": first line must be a positive K");
  Eigen::MatrixXd m(k, k);
  for (long i = 0; i < k; ++i) {
    for (long j = 0; j < k; ++j) {
      if (!(in >> m(i, j))) throw ParseError(path.string() + ": expected " + std::to_string(k * k) + " entries");
    }
  }
  std::string extra;
  if (in >> extra) throw ParseError(path.string() + ": trailing data '" + extra + "'");
  return m;
}

}  // namespace dencomb
