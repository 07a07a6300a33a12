#pragma once

#include "blockmod/sbm.hpp"
#include "blockmod/special.hpp"

#include <string>
#include <string_view>

namespace blockmod {

/// Dirichlet(alpha) prior on class proportions and Beta(beta1, beta2) on
/// each edge probability. All strictly positive.
struct PriorHyper {
  double alpha = 0.5;
  double beta1 = 0.5;
  double beta2 = 0.5;

  void validate() const;
};

enum class ObjectiveTag { Bayes, Likelihood, LikelihoodTilde };

struct ModularityKind {
  ObjectiveTag tag = ObjectiveTag::Bayes;
  PriorHyper hyper{};

  static ModularityKind bayes(PriorHyper h = {}) { return {ObjectiveTag::Bayes, h}; }
  static ModularityKind likelihood() { return {ObjectiveTag::Likelihood, {}}; }
  static ModularityKind likelihood_tilde() { return {ObjectiveTag::LikelihoodTilde, {}}; }

  std::string name() const;
  /// Accepts "bayes", "ml"/"likelihood" and "ml-tilde".
  static ModularityKind parse(std::string_view name, PriorHyper h = {});
};

/// Bayesian modularity: n^-2 [ sum_{a<=b} log B(O_ab + beta1, n_ab - O_ab + beta2)
///                             + sum_a log Gamma(n_a + alpha) ].
double q_bayes(const BlockCounts& counts, const PriorHyper& hyper);

/// Likelihood modularity: n^-2 sum_{a<=b} n_ab tau(O_ab / n_ab); empty blocks add 0.
double q_likelihood(const BlockCounts& counts);

/// Prior part: n^-2 sum_{a : n_a + floor(alpha) >= 2} n_a log n_a - 1/n.
double q_prior(const BlockCounts& counts, double alpha);

/// (2 n^2)^-1 sum_{a,b} n_a n_b tau(O~_ab / (n_a n_b)) over all ordered pairs.
double ll_tilde(const BlockCounts& counts);

double evaluate(const BlockCounts& counts, const ModularityKind& kind);

/// Per-block decomposition n^2 Q = sum_{a<=b} pair_term + sum_a size_term,
/// with log Gamma tabulated for a fixed node count. The local search works
/// with these unnormalised terms.
class ObjectiveTerms {
 public:
  ObjectiveTerms(ModularityKind kind, int n);

  const ModularityKind& kind() const { return kind_; }
  int n() const { return n_; }

  double pair_term(bool diagonal, std::int64_t edges, std::int64_t size_a,
                   std::int64_t size_b) const;
  double size_term(std::int64_t size) const;

  /// n^2 times the objective.
  double unnormalised(const BlockCounts& counts) const;
  double value(const BlockCounts& counts) const {
    return unnormalised(counts) / (static_cast<double>(n_) * n_);
  }

 private:
  ModularityKind kind_;
  int n_;
  LogGammaTable lg_beta1_, lg_beta2_, lg_beta12_, lg_alpha_;
};

}  // namespace blockmod
