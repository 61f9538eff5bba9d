#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

#include <json.hpp>

#include "hrf/state.hpp"

namespace hrf {

struct DensityMatrix {
  int n_qubits = 0;
  Eigen::MatrixXcd mat;

  std::uint64_t dim() const { return static_cast<std::uint64_t>(mat.rows()); }
};

// Rank-1 projector |psi><psi|.
inline DensityMatrix to_density(const RealState& state) {
  if (!state.is_normalized(1e-8))
    throw std::invalid_argument("to_density: state is not normalized");
  const auto dim = static_cast<Eigen::Index>(state.dim());
  Eigen::VectorXd psi(dim);
  for (Eigen::Index j = 0; j < dim; ++j) psi[j] = state.amplitudes[j];
  DensityMatrix rho;
  rho.n_qubits = state.n_qubits;
  rho.mat = (psi * psi.transpose()).cast<std::complex<double>>();
  return rho;
}

inline bool is_hermitian(const Eigen::MatrixXcd& m, double tol = 1e-9) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

// Nested arrays of [re, im] pairs.
inline nlohmann::json density_to_json(const DensityMatrix& rho) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < rho.mat.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < rho.mat.cols(); ++c)
      row.push_back({rho.mat(r, c).real(), rho.mat(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline DensityMatrix density_from_json(const nlohmann::json& j) {
  const auto dim = static_cast<Eigen::Index>(j.size());
  if (dim == 0 || (dim & (dim - 1)) != 0)
    throw std::invalid_argument("density_from_json: dimension must be a power of two");
  DensityMatrix rho;
  rho.n_qubits = 0;
  for (Eigen::Index d = dim; d > 1; d >>= 1) ++rho.n_qubits;
  rho.mat.resize(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    const auto& row = j.at(r);
    if (static_cast<Eigen::Index>(row.size()) != dim)
      throw std::invalid_argument("density_from_json: matrix must be square");
    for (Eigen::Index c = 0; c < dim; ++c)
      rho.mat(r, c) = {row.at(c).at(0).get<double>(), row.at(c).at(1).get<double>()};
  }
  return rho;
}

}  // namespace hrf
