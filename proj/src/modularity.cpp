#include "blockmod/modularity.hpp"

#include <cmath>
#include <stdexcept>

namespace blockmod {

void PriorHyper::validate() const {
  if (!(alpha > 0.0) || !(beta1 > 0.0) || !(beta2 > 0.0))
    throw std::invalid_argument("PriorHyper: alpha, beta1 and beta2 must be strictly positive");
}

std::string ModularityKind::name() const {
  switch (tag) {
    case ObjectiveTag::Bayes: return "bayes";
    case ObjectiveTag::Likelihood: return "ml";
    case ObjectiveTag::LikelihoodTilde: return "ml-tilde";
  }
  return "unknown";
}

ModularityKind ModularityKind::parse(std::string_view name, PriorHyper h) {
  if (name == "bayes") {
    h.validate();
    return bayes(h);
  }
  if (name == "ml" || name == "likelihood") return likelihood();
  if (name == "ml-tilde") return likelihood_tilde();
  throw std::invalid_argument("unknown objective '" + std::string(name) + "'");
}

namespace {

double n_squared(const BlockCounts& c) { return static_cast<double>(c.n()) * c.n(); }

// n_ab tau(O / n_ab), zero for an empty block
double likelihood_pair(std::int64_t edges, std::int64_t pairs) {
  if (pairs == 0) return 0.0;
  return static_cast<double>(pairs) * tau(static_cast<double>(edges) / static_cast<double>(pairs));
}

// one ordered-pair-symmetrised block of the tilde variant
double tilde_pair(bool diagonal, std::int64_t edges, std::int64_t size_a, std::int64_t size_b) {
  const double cells = static_cast<double>(size_a) * static_cast<double>(size_b);
  if (cells == 0.0) return 0.0;
  if (diagonal) return 0.5 * cells * tau(2.0 * static_cast<double>(edges) / cells);
  return cells * tau(static_cast<double>(edges) / cells);
}

}  // namespace

double q_bayes(const BlockCounts& counts, const PriorHyper& hyper) {
  hyper.validate();
  const int K = counts.K();
  double total = 0.0;
  for (int a = 0; a < K; ++a)
    for (int b = a; b < K; ++b) {
      const auto O = counts.O(a, b);
      const auto N = counts.pairs(a, b);
      total += log_beta(static_cast<double>(O) + hyper.beta1,
                        static_cast<double>(N - O) + hyper.beta2);
    }
  for (int a = 0; a < K; ++a) total += log_gamma(static_cast<double>(counts.size(a)) + hyper.alpha);
  return total / n_squared(counts);
}

double q_likelihood(const BlockCounts& counts) {
  const int K = counts.K();
  double total = 0.0;
  for (int a = 0; a < K; ++a)
    for (int b = a; b < K; ++b) total += likelihood_pair(counts.O(a, b), counts.pairs(a, b));
  return total / n_squared(counts);
}

double q_prior(const BlockCounts& counts, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("q_prior: alpha must be positive");
  const auto floor_alpha = static_cast<std::int64_t>(std::floor(alpha));
  double total = 0.0;
  for (auto size : counts.sizes())
    if (size + floor_alpha >= 2) total += xlogx(static_cast<double>(size));
  return total / n_squared(counts) - 1.0 / counts.n();
}

double ll_tilde(const BlockCounts& counts) {
  const int K = counts.K();
  double total = 0.0;
  for (int a = 0; a < K; ++a)
    for (int b = a; b < K; ++b)
      total += tilde_pair(a == b, counts.O(a, b), counts.size(a), counts.size(b));
  return total / n_squared(counts);
}

double evaluate(const BlockCounts& counts, const ModularityKind& kind) {
  switch (kind.tag) {
    case ObjectiveTag::Bayes: return q_bayes(counts, kind.hyper);
    case ObjectiveTag::Likelihood: return q_likelihood(counts);
    case ObjectiveTag::LikelihoodTilde: return ll_tilde(counts);
  }
  throw std::logic_error("evaluate: unknown objective");
}

// ---------------------------------------------------------------------------

ObjectiveTerms::ObjectiveTerms(ModularityKind kind, int n) : kind_(kind), n_(n) {
  if (n < 1) throw std::invalid_argument("ObjectiveTerms: n must be at least 1");
  if (kind_.tag == ObjectiveTag::Bayes) {
    kind_.hyper.validate();
    const std::int64_t max_pairs = static_cast<std::int64_t>(n) * (n - 1) / 2 + 1;
    lg_beta1_ = LogGammaTable(kind_.hyper.beta1, max_pairs);
    lg_beta2_ = LogGammaTable(kind_.hyper.beta2, max_pairs);
    lg_beta12_ = LogGammaTable(kind_.hyper.beta1 + kind_.hyper.beta2, max_pairs);
    lg_alpha_ = LogGammaTable(kind_.hyper.alpha, n);
  }
}

double ObjectiveTerms::pair_term(bool diagonal, std::int64_t edges, std::int64_t size_a,
                                 std::int64_t size_b) const {
  switch (kind_.tag) {
    case ObjectiveTag::Bayes: {
      const std::int64_t pairs = diagonal ? size_a * (size_a - 1) / 2 : size_a * size_b;
      return lg_beta1_(edges) + lg_beta2_(pairs - edges) - lg_beta12_(pairs);
    }
    case ObjectiveTag::Likelihood: {
      const std::int64_t pairs = diagonal ? size_a * (size_a - 1) / 2 : size_a * size_b;
      return likelihood_pair(edges, pairs);
    }
    case ObjectiveTag::LikelihoodTilde: return tilde_pair(diagonal, edges, size_a, size_b);
  }
  return 0.0;
}

double ObjectiveTerms::size_term(std::int64_t size) const {
  return kind_.tag == ObjectiveTag::Bayes ? lg_alpha_(size) : 0.0;
}

double ObjectiveTerms::unnormalised(const BlockCounts& counts) const {
  const int K = counts.K();
  double total = 0.0;
  for (int a = 0; a < K; ++a)
    for (int b = a; b < K; ++b)
      total += pair_term(a == b, counts.O(a, b), counts.size(a), counts.size(b));
  for (int a = 0; a < K; ++a) total += size_term(counts.size(a));
  return total;
}

}  // namespace blockmod
