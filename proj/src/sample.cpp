#include "magicmps/sample.hpp"

namespace magicmps {

PerfectSampler::PerfectSampler(const MatrixProductState& psi) {
  double nn = norm(psi);
  if (std::abs(nn - 1.0) > 1e-8)
    throw NumericalError("perfect_sample: state must be normalized (norm = " +
                         std::to_string(nn) + ")");
  psi_ = (psi.ortho_center() && *psi.ortho_center() == 0) ? psi : canonicalize(psi, 0);
}

SampleResult PerfectSampler::sample(Rng& rng) const {
  const std::size_t n = psi_.n_sites();
  SampleResult out;
  out.configuration.reserve(n);
  out.probability = 1.0;

  Eigen::RowVectorXcd v = Eigen::RowVectorXcd::Ones(1);
  for (std::size_t i = 0; i < n; ++i) {
    const DenseTensor& t = psi_.site(i);
    const std::size_t d = t.dim(1), r = t.dim(2);
    const double vnorm2 = v.squaredNorm();

    // conditional weights of each physical value
    std::vector<Eigen::RowVectorXcd> branch(d);
    std::vector<double> w(d);
    double total = 0.0;
    for (std::size_t s = 0; s < d; ++s) {
      Eigen::Map<const MatC> slice(t.data().data(), t.dim(0), d * r);
      branch[s] = v * slice.middleCols(s * r, r);
      w[s] = branch[s].squaredNorm() / vnorm2;
      total += w[s];
    }
    double u = rng.uniform() * total;
    std::size_t pick = d - 1;
    double acc = 0.0;
    for (std::size_t s = 0; s < d; ++s) {
      acc += w[s];
      if (u < acc) {
        pick = s;
        break;
      }
    }
    out.configuration.push_back(pick);
    out.probability *= w[pick] / total;
    v = branch[pick];
  }
  return out;
}

SampleResult perfect_sample(const MatrixProductState& psi, Rng& rng) {
  return PerfectSampler(psi).sample(rng);
}

}  // namespace magicmps
