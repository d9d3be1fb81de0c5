// Copyright 2026 The Arena Audit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "arena/btrank.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "Eigen/Cholesky"
#include "Eigen/Core"
#include "arena/rng.hpp"
#include "parallel.hpp"

// The fitter maximizes the tie-split Bradley-Terry objective
//
//   J(s) = (1/N) sum_{i<j} [ w_ij log sigma(s_i - s_j)
//                          + w_ji log sigma(s_j - s_i) ]  -  lambda sum_i s_i^2
//
// where w_ij = wins of i over j plus half the ties and N is the total battle
// count. J is strictly concave for lambda > 0, and since the likelihood term
// is translation invariant while the penalty is minimized at zero mean, the
// unique maximizer is already mean-anchored. Damped Newton steps with an
// Armijo backtracking line search keep the recorded objective trace monotone.

namespace arena {
namespace {

struct PairStats {
  int i = 0;
  int j = 0;
  int64_t wins_i = 0;
  int64_t wins_j = 0;
  int64_t ties = 0;

  int64_t battles() const { return wins_i + wins_j + ties; }
};

struct SufficientStats {
  std::vector<PairStats> pairs;
  int64_t total_battles = 0;
};

SufficientStats Accumulate(const PreferenceDataset& dataset) {
  const size_t k = dataset.roster().size();
  std::vector<int64_t> wins(k * k, 0);
  std::vector<int64_t> ties(k * k, 0);
  for (const auto& r : dataset.records()) {
    const int a = dataset.IndexOf(r.left);
    const int b = dataset.IndexOf(r.right);
    switch (r.label) {
      case VoteLabel::kLeftWins: ++wins[a * k + b]; break;
      case VoteLabel::kRightWins: ++wins[b * k + a]; break;
      case VoteLabel::kTie: ++ties[std::min(a, b) * k + std::max(a, b)]; break;
    }
  }
  SufficientStats stats;
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = i + 1; j < k; ++j) {
      PairStats p;
      p.i = static_cast<int>(i);
      p.j = static_cast<int>(j);
      p.wins_i = wins[i * k + j];
      p.wins_j = wins[j * k + i];
      p.ties = ties[i * k + j];
      if (p.battles() > 0) {
        stats.total_battles += p.battles();
        stats.pairs.push_back(p);
      }
    }
  }
  return stats;
}

double LogSigmoid(double x) {
  return x < 0 ? x - std::log1p(std::exp(x)) : -std::log1p(std::exp(-x));
}

double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double Objective(const SufficientStats& stats, double lambda,
                 const Eigen::VectorXd& s) {
  double ll = 0.0;
  for (const auto& p : stats.pairs) {
    const double d = s[p.i] - s[p.j];
    const double wi = p.wins_i + 0.5 * p.ties;
    const double wj = p.wins_j + 0.5 * p.ties;
    ll += wi * LogSigmoid(d) + wj * LogSigmoid(-d);
  }
  return ll / static_cast<double>(stats.total_battles) -
         lambda * s.squaredNorm();
}

Eigen::VectorXd Gradient(const SufficientStats& stats, double lambda,
                         const Eigen::VectorXd& s) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(s.size());
  for (const auto& p : stats.pairs) {
    const double wi = p.wins_i + 0.5 * p.ties;
    const double n = static_cast<double>(p.battles());
    const double resid = wi - n * Sigmoid(s[p.i] - s[p.j]);
    g[p.i] += resid;
    g[p.j] -= resid;
  }
  g /= static_cast<double>(stats.total_battles);
  g -= 2.0 * lambda * s;
  return g;
}

// Negated Hessian of J: symmetric positive definite for lambda > 0.
Eigen::MatrixXd NegHessian(const SufficientStats& stats, double lambda,
                           const Eigen::VectorXd& s) {
  const auto k = s.size();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(k, k);
  for (const auto& p : stats.pairs) {
    const double sig = Sigmoid(s[p.i] - s[p.j]);
    const double curv =
        static_cast<double>(p.battles()) * sig * (1.0 - sig) /
        static_cast<double>(stats.total_battles);
    h(p.i, p.i) += curv;
    h(p.j, p.j) += curv;
    h(p.i, p.j) -= curv;
    h(p.j, p.i) -= curv;
  }
  h.diagonal().array() += 2.0 * lambda;
  return h;
}

}  // namespace

WinMatrix::WinMatrix(std::vector<ModelId> roster, std::vector<double> win_prob,
                     std::vector<int64_t> battle_count)
    : roster_(std::move(roster)),
      win_prob_(std::move(win_prob)),
      battle_count_(std::move(battle_count)) {}

std::optional<double> WinMatrix::win_prob(size_t i, size_t j) const {
  if (i == j || battle_count(i, j) == 0) return std::nullopt;
  return win_prob_[i * roster_.size() + j];
}

WinMatrix ComputeWinMatrix(const PreferenceDataset& dataset) {
  const size_t k = dataset.roster().size();
  std::vector<int64_t> wins(k * k, 0);
  std::vector<int64_t> ties(k * k, 0);
  std::vector<int64_t> battles(k * k, 0);
  for (const auto& r : dataset.records()) {
    const size_t a = dataset.IndexOf(r.left);
    const size_t b = dataset.IndexOf(r.right);
    ++battles[a * k + b];
    ++battles[b * k + a];
    switch (r.label) {
      case VoteLabel::kLeftWins: ++wins[a * k + b]; break;
      case VoteLabel::kRightWins: ++wins[b * k + a]; break;
      case VoteLabel::kTie:
        ++ties[a * k + b];
        ++ties[b * k + a];
        break;
    }
  }
  std::vector<double> prob(k * k, 0.0);
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = 0; j < k; ++j) {
      if (i == j || battles[i * k + j] == 0) continue;
      prob[i * k + j] = (wins[i * k + j] + 0.5 * ties[i * k + j]) /
                        static_cast<double>(battles[i * k + j]);
    }
  }
  return WinMatrix(dataset.roster(), std::move(prob), std::move(battles));
}

double BtScores::ScoreOf(const ModelId& id) const {
  for (size_t i = 0; i < roster.size(); ++i)
    if (roster[i] == id) return score[i];
  throw ValidationError("model '" + id.str() + "' not in fitted roster");
}

FitResult FitBradleyTerry(const PreferenceDataset& dataset,
                          const FitOptions& options) {
  if (!(options.regularization > 0.0))
    throw ValidationError("regularization must be > 0");
  if (dataset.roster().size() < 2)
    throw ValidationError("need at least 2 models to fit");
  if (dataset.records().empty())
    throw ValidationError("cannot fit an empty dataset");

  std::vector<int64_t> per_model(dataset.roster().size(), 0);
  for (const auto& r : dataset.records()) {
    ++per_model[dataset.IndexOf(r.left)];
    ++per_model[dataset.IndexOf(r.right)];
  }
  for (size_t i = 0; i < per_model.size(); ++i) {
    if (per_model[i] == 0)
      throw ValidationError("model '" + dataset.roster()[i].str() +
                            "' has no battles");
  }

  const SufficientStats stats = Accumulate(dataset);
  const double lambda = options.regularization;
  const auto k = static_cast<Eigen::Index>(dataset.roster().size());

  Eigen::VectorXd s = Eigen::VectorXd::Zero(k);
  double objective = Objective(stats, lambda, s);

  FitResult result;
  result.objective_trace.push_back(objective);

  Eigen::VectorXd grad = Gradient(stats, lambda, s);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    Eigen::MatrixXd neg_hessian = NegHessian(stats, lambda, s);
    Eigen::LLT<Eigen::MatrixXd> llt(neg_hessian);
    Eigen::VectorXd direction = llt.info() == Eigen::Success
                                    ? llt.solve(grad).eval()
                                    : grad;  // gradient fallback

    const double slope = grad.dot(direction);
    double step = 1.0;
    double candidate_obj = objective;
    Eigen::VectorXd candidate = s;
    constexpr double kArmijo = 1e-4;
    while (step > 1e-14) {
      candidate = s + step * direction;
      candidate_obj = Objective(stats, lambda, candidate);
      if (candidate_obj >= objective + kArmijo * step * slope) break;
      step *= 0.5;
    }
    if (candidate_obj < objective) {
      // No ascent possible: numerically at the optimum.
      result.final_grad_norm = grad.norm();
      result.converged = true;
      break;
    }

    const double improvement = candidate_obj - objective;
    s = candidate;
    objective = candidate_obj;
    grad = Gradient(stats, lambda, s);
    result.objective_trace.push_back(objective);
    result.iterations = iter + 1;
    result.final_grad_norm = grad.norm();
    if (improvement < options.tolerance) {
      result.converged = true;
      break;
    }
  }

  if (!result.converged) {
    std::ostringstream msg;
    msg << "Bradley-Terry fit did not converge within "
        << options.max_iterations
        << " iterations (final gradient norm " << result.final_grad_norm
        << ")";
    throw ComputeError(msg.str());
  }

  // The optimum of the penalized objective is mean-zero already; subtracting
  // the numerical mean enforces the anchoring invariant exactly.
  s.array() -= s.mean();
  result.scores.roster = dataset.roster();
  result.scores.score.assign(s.data(), s.data() + s.size());
  return result;
}

Leaderboard MakeLeaderboard(const BtScores& scores) {
  const size_t k = scores.roster.size();
  std::vector<size_t> order(k);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (scores.score[a] != scores.score[b])
      return scores.score[a] > scores.score[b];
    return scores.roster[a] < scores.roster[b];
  });
  Leaderboard board;
  board.rows.reserve(k);
  for (size_t pos = 0; pos < k; ++pos) {
    LeaderboardRow row;
    row.rank = static_cast<int>(pos + 1);
    row.model = scores.roster[order[pos]];
    row.score = scores.score[order[pos]];
    board.rows.push_back(std::move(row));
  }
  return board;
}

int Leaderboard::RankOf(const ModelId& id) const {
  for (const auto& row : rows)
    if (row.model == id) return row.rank;
  throw ValidationError("model '" + id.str() + "' not on the leaderboard");
}

BootstrapResult BootstrapRanks(const PreferenceDataset& dataset, int resamples,
                               uint64_t seed, const FitOptions& options) {
  if (resamples < 1) throw ValidationError("resamples must be >= 1");

  BootstrapResult result;
  result.resamples = resamples;
  result.board = MakeLeaderboard(FitBradleyTerry(dataset, options).scores);

  const size_t n = dataset.records().size();
  const size_t k = dataset.roster().size();

  // ranks[r][m]: rank of roster model m in resample r, or 0 when the model
  // vanished from that resample.
  std::vector<std::vector<int>> ranks(resamples, std::vector<int>(k, 0));
  internal::ParallelFor(static_cast<size_t>(resamples), [&](size_t r) {
    Rng rng(DeriveSeed(seed, r));
    std::vector<PreferenceRecord> sampled;
    sampled.reserve(n);
    for (size_t i = 0; i < n; ++i)
      sampled.push_back(dataset.records()[rng.NextIndex(n)]);
    const auto resampled = PreferenceDataset::FromRecords(std::move(sampled));
    const auto board =
        MakeLeaderboard(FitBradleyTerry(resampled, options).scores);
    for (const auto& row : board.rows)
      ranks[r][dataset.IndexOf(row.model)] = row.rank;
  });

  for (size_t m = 0; m < k; ++m) {
    std::vector<int> samples;
    samples.reserve(resamples);
    for (int r = 0; r < resamples; ++r)
      if (ranks[r][m] > 0) samples.push_back(ranks[r][m]);
    const int skipped = resamples - static_cast<int>(samples.size());
    if (skipped > 0) result.skipped[dataset.roster()[m]] = skipped;
    if (samples.empty()) continue;
    std::sort(samples.begin(), samples.end());
    const size_t last = samples.size() - 1;
    const auto lo = static_cast<size_t>(std::floor(0.025 * last));
    const auto hi = static_cast<size_t>(std::ceil(0.975 * last));
    for (auto& row : result.board.rows) {
      if (row.model == dataset.roster()[m]) {
        row.rank_interval = {samples[lo], samples[hi]};
        break;
      }
    }
  }
  return result;
}

const RankShift& RankDisplacement::Of(const ModelId& id) const {
  for (const auto& shift : shifts)
    if (shift.model == id) return shift;
  throw ValidationError("model '" + id.str() + "' not in displacement");
}

RankDisplacement ComputeDisplacement(const Leaderboard& base,
                                     const Leaderboard& other) {
  if (base.rows.size() != other.rows.size())
    throw ValidationError("leaderboard rosters differ in size");
  std::map<ModelId, int> new_ranks;
  for (const auto& row : other.rows) new_ranks[row.model] = row.rank;

  RankDisplacement displacement;
  displacement.shifts.reserve(base.rows.size());
  for (const auto& row : base.rows) {
    auto it = new_ranks.find(row.model);
    if (it == new_ranks.end())
      throw ValidationError("model '" + row.model.str() +
                            "' missing from the other leaderboard");
    RankShift shift;
    shift.model = row.model;
    shift.base_rank = row.rank;
    shift.new_rank = it->second;
    shift.delta = shift.base_rank - shift.new_rank;
    displacement.shifts.push_back(std::move(shift));
  }
  return displacement;
}

}  // namespace arena
