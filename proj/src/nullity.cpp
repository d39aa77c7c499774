#include "magicmps/nullity.hpp"

#include <algorithm>
#include <cmath>

namespace magicmps {

namespace {

// one squaring pass: normalize the iterate, apply its own diagonal, track norms
NullityTrace run_iteration(MatrixProductState& p, std::size_t n_qubits,
                           const NullityOptions& opt) {
  NullityTrace trace;
  double t_prev = norm(p);
  if (t_prev <= 0.0) throw NumericalError("nullity: zero input vector");

  // one extra pass after the norm-ratio test fires: the ratio deviation is
  // quadratic in the fixed-point error, so the refinement brings the
  // residual |W g - t g| down to the epsilon scale itself
  bool refine = false;
  for (std::size_t k = 1; k <= opt.max_iter + 1; ++k) {
    scale_inplace(p, 1.0 / t_prev);
    if (!p.ortho_center() || *p.ortho_center() != 0) canonicalize_inplace(p, 0);
    CompressResult step =
        apply_diagonal_vector(p, p, opt.iter_policy, opt.backend, opt.density_matrix);
    p = std::move(step.psi);
    double t_k = norm(p);
    if (t_k <= 0.0) throw NumericalError("nullity: iterate collapsed to zero");

    NullityIter rec;
    rec.k = k;
    rec.t_k = t_k;
    rec.nu_k = static_cast<double>(n_qubits) + 2.0 * std::log2(t_k);
    rec.max_bond = p.max_bond();
    trace.iters.push_back(rec);

    if (refine) break;
    if (std::abs(1.0 - t_k / t_prev) <= opt.epsilon) {
      trace.converged = true;
      trace.converged_at = k;
      refine = true;
    } else if (k >= opt.max_iter) {
      break;
    }
    t_prev = t_k;
  }
  return trace;
}

}  // namespace

NullityResult nullity_from_vector(const MatrixProductState& p0, std::size_t n_qubits,
                                  const NullityOptions& opt) {
  NullityResult out;
  MatrixProductState p = p0;
  out.trace = run_iteration(p, n_qubits, opt);

  const double t_final = out.trace.iters.empty() ? 1.0 : out.trace.iters.back().t_k;
  out.nu = static_cast<double>(n_qubits) + 2.0 * std::log2(t_final);
  out.nu_rounded = std::lround(out.nu);
  out.rounding_gap = std::abs(out.nu - static_cast<double>(out.nu_rounded));
  out.fixed_point = normalized(p);

  // fixed-point residual |W g - t g|, guards against false convergence
  if (out.trace.converged) {
    CompressResult wg = apply_diagonal_vector(out.fixed_point, out.fixed_point, opt.iter_policy,
                                              opt.backend, false);
    double wg_norm = norm(wg.psi);
    cx overlap = inner_product(wg.psi, out.fixed_point);
    double r2 = wg_norm * wg_norm + t_final * t_final - 2.0 * t_final * overlap.real();
    out.trace.residual = std::sqrt(std::max(r2, 0.0));
    // squaring doubles any amplitude imbalance seeded by truncation, so a
    // converged-but-compressed run floors near sqrt(truncation threshold);
    // genuine false convergence (a wrong coset structure) sits at 1e-2 and
    // above, so the guard keeps its discriminating power
    out.trace.residual_ok = out.trace.residual <= std::max(10.0 * opt.epsilon, 1e-3);
  }
  return out;
}

NullityResult nullity(const MatrixProductState& psi, const NullityOptions& opt) {
  PauliVector pv = build_pauli_vector(psi, opt.pauli_policy, opt.backend);
  NullityResult out = nullity_from_vector(pv.mps, pv.source_n, opt);
  out.trace.build_error = pv.build_truncation_error;
  out.pauli = std::move(pv);
  return out;
}

StabilizerGroup extract_stabilizer_group(const NullityResult& res, std::uint64_t seed,
                                         const ExtractOptions& opt) {
  if (!res.trace.converged)
    throw ConvergenceError("extract_stabilizer_group: iteration did not converge");
  if (!res.trace.residual_ok)
    throw NumericalError("extract_stabilizer_group: fixed point fails the residual check");

  const std::size_t n = res.pauli.source_n;
  if (res.nu_rounded < 0 || res.nu_rounded > static_cast<long>(n))
    throw NumericalError("extract_stabilizer_group: nullity estimate out of range");
  const std::size_t m = n - static_cast<std::size_t>(res.nu_rounded);

  StabilizerGroup group;
  group.nullity = static_cast<std::size_t>(res.nu_rounded);
  if (m == 0) return group;

  const double ideal =
      std::pow(2.0, 0.5 * (static_cast<double>(res.nu_rounded) - static_cast<double>(n)));
  const std::size_t budget =
      opt.max_samples > 0 ? opt.max_samples : std::max<std::size_t>(128, 16 * (m + 4));

  PerfectSampler sampler(res.fixed_point);
  Rng rng(seed);
  Gf2Basis basis(2 * n);
  std::vector<PauliString> generators;

  for (std::size_t draw = 0; draw < budget && basis.rank() < m; ++draw) {
    SampleResult s = sampler.sample(rng);
    std::vector<std::uint8_t> codes(s.configuration.begin(), s.configuration.end());
    PauliString p(std::move(codes), +1);

    double amp = std::abs(s.probability) > 0 ? std::sqrt(s.probability) : 0.0;
    if (amp < opt.amplitude_tol * ideal || amp > (2.0 - opt.amplitude_tol) * ideal)
      throw NumericalError(
          "extract_stabilizer_group: sampled amplitude inconsistent with a uniform coset "
          "(unconverged fixed point?)");
    if (p.is_identity()) continue;
    if (!basis.insert(p.to_bits())) continue;

    double ev = pauli_expectation(res.pauli, p);
    if (std::abs(ev) < 0.5)
      throw NumericalError("extract_stabilizer_group: sign amplitude below 0.5 of ideal "
                           "(truncation damage)");
    p.set_sign(ev > 0 ? +1 : -1);
    generators.push_back(std::move(p));
  }
  if (basis.rank() != m)
    throw ConvergenceError("extract_stabilizer_group: sampling did not complete the group");

  group.generators = std::move(generators);
  return group;
}

namespace {

// residual after removing one stratum: v - (1/g_amp) diag(g) v
MatrixProductState project_out(const MatrixProductState& v, const MatrixProductState& g,
                               double g_amp, const NullityOptions& opt) {
  CompressResult wv = apply_diagonal_vector(g, v, opt.iter_policy, opt.backend, false);
  MatrixProductState diff = mps_add(v, wv.psi, cx(1, 0), cx(-1.0 / g_amp, 0));
  CompressResult c = compress_svd(diff, opt.iter_policy);
  return c.psi;
}

}  // namespace

MagicGapResult magic_gap(const MatrixProductState& psi, const NullityOptions& opt,
                         std::uint64_t seed) {
  NullityResult base = nullity(psi, opt);
  MagicGapResult out;
  out.nu = base.nu;

  const std::size_t n = base.pauli.source_n;
  const double g_amp =
      std::pow(2.0, 0.5 * (static_cast<double>(base.nu_rounded) - static_cast<double>(n)));
  MatrixProductState residual = project_out(base.pauli.mps, base.fixed_point, g_amp, opt);

  const double flag_threshold = std::max(10.0 * opt.epsilon, 1e-7);
  if (norm(residual) < flag_threshold) {
    out.value = 1.0;
    out.stabilizer_flagged = true;
    out.witness = PauliString(n);
    return out;
  }

  NullityResult second = nullity_from_vector(residual, n, opt);
  Rng rng(seed);
  SampleResult s = perfect_sample(second.fixed_point, rng);
  std::vector<std::uint8_t> codes(s.configuration.begin(), s.configuration.end());
  out.witness = PauliString(std::move(codes), +1);
  double ev = pauli_expectation(base.pauli, out.witness);
  out.witness.set_sign(ev >= 0 ? +1 : -1);
  out.value = 1.0 - std::abs(ev);
  return out;
}

std::vector<SpectrumStratum> learn_spectrum_strata(const MatrixProductState& psi,
                                                   const StrataOptions& opt, double epsilon,
                                                   std::uint64_t seed) {
  NullityResult base = nullity(psi, opt.nullity);
  const std::size_t n = base.pauli.source_n;

  std::vector<SpectrumStratum> strata;
  SpectrumStratum first;
  first.level = 1;
  first.magnitude = 1.0;
  first.fixed_point = base.fixed_point;
  StabilizerGroup group = extract_stabilizer_group(base, seed);
  first.representatives = group.generators;
  strata.push_back(first);

  // span of the stabilizer codes, for canonical coset representatives
  Gf2Basis stab_span(2 * n);
  for (const auto& g : group.generators) stab_span.insert(g.to_bits());

  double g_amp = std::pow(2.0, 0.5 * (static_cast<double>(base.nu_rounded) -
                                      static_cast<double>(n)));
  MatrixProductState residual = project_out(base.pauli.mps, base.fixed_point, g_amp, opt.nullity);

  Rng rng(seed ^ 0x5bd1e995u);
  std::size_t level = 2;
  while (norm(residual) > epsilon) {
    if (level > opt.max_strata)
      throw ConvergenceError("learn_spectrum_strata: max_strata reached before the residual "
                             "emptied");
    NullityResult next = nullity_from_vector(residual, n, opt.nullity);

    SpectrumStratum st;
    st.level = level;
    st.fixed_point = next.fixed_point;

    PerfectSampler sampler(next.fixed_point);
    double sampled_amp = 0.0;
    for (std::size_t d = 0; d < opt.representatives_per_stratum; ++d) {
      SampleResult s = sampler.sample(rng);
      std::vector<std::uint8_t> codes(s.configuration.begin(), s.configuration.end());
      PauliString raw(std::move(codes), +1);
      sampled_amp = std::max(sampled_amp, std::sqrt(std::max(s.probability, 0.0)));
      // canonical representative of the coset mod the stabilizer span
      PauliString rep = PauliString::from_bits(stab_span.reduce(raw.to_bits()), n);
      double ev = pauli_expectation(base.pauli, rep);
      rep.set_sign(ev >= 0 ? +1 : -1);
      if (std::none_of(st.representatives.begin(), st.representatives.end(),
                       [&](const PauliString& q) { return q.codes() == rep.codes(); }))
        st.representatives.push_back(std::move(rep));
    }
    st.magnitude = std::abs(pauli_expectation(base.pauli, st.representatives.front()));
    if (!strata.empty() && st.magnitude >= strata.back().magnitude - 1e-10)
      throw NumericalError("learn_spectrum_strata: stratum magnitudes failed to decrease");
    strata.push_back(st);

    // peel this stratum off; the fixed-point amplitude sets the scale
    double amp = sampled_amp;
    if (amp <= 0.0) throw NumericalError("learn_spectrum_strata: zero stratum amplitude");
    residual = project_out(residual, next.fixed_point, amp, opt.nullity);
    ++level;
  }
  return strata;
}

SampledM1 sampled_m1(const PauliVector& pv, std::size_t n_samples, std::uint64_t seed) {
  if (n_samples == 0) throw ConfigError("sampled_m1: need at least one sample");
  PerfectSampler sampler(pv.mps);  // throws on unnormalized input
  Rng rng(seed);

  const double n = static_cast<double>(pv.source_n);
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    SampleResult s = sampler.sample(rng);
    // <P>^2 = 2^N * amplitude^2 = 2^N * probability
    double x = -(n + std::log2(std::max(s.probability, 1e-300)));
    sum += x;
    sum2 += x * x;
  }
  SampledM1 out;
  out.n_samples = n_samples;
  out.estimate = sum / static_cast<double>(n_samples);
  double var = std::max(0.0, sum2 / static_cast<double>(n_samples) - out.estimate * out.estimate);
  out.standard_error = std::sqrt(var / static_cast<double>(n_samples));
  return out;
}

std::vector<double> nk_lower_bounds(const MatrixProductState& psi, const NullityOptions& opt,
                                    std::size_t k_max) {
  NullityOptions o = opt;
  o.epsilon = 0.0;  // run all k_max iterations
  o.max_iter = k_max;
  PauliVector pv = build_pauli_vector(psi, o.pauli_policy, o.backend);
  MatrixProductState p = pv.mps;
  NullityResult res = nullity_from_vector(p, pv.source_n, o);
  std::vector<double> out;
  out.reserve(res.trace.iters.size());
  for (const auto& it : res.trace.iters) out.push_back(it.nu_k);
  return out;
}

}  // namespace magicmps
