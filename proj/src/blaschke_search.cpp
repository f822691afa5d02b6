#include "hardy/blaschke_search.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <limits>
#include <map>
#include <numbers>

#include "hardy/random.hpp"

namespace hardy {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kTargetedAngles = 64;
constexpr long kNodesPerBudgetUnit = 5000;
constexpr std::size_t kExactSampleLimit = 24;
constexpr std::size_t kRuinPairLimit = 16;  // support size above which only single indices are ruined
constexpr double kInvPhi = 0.6180339887498949;  // 1 / golden ratio

// Maximizes `log_modulus` (a function of the angle) given its values on the
// uniform grid. The grid argmax is refined by golden-section search on the
// bracket formed by its two neighbours.
template <typename LogModulus>
DiskMax refine_circle_max(std::span<const double> grid_logs, double R, LogModulus&& log_modulus) {
  const int nodes = static_cast<int>(grid_logs.size());
  const double step = 2.0 * std::numbers::pi / nodes;
  const int best = static_cast<int>(std::max_element(grid_logs.begin(), grid_logs.end()) - grid_logs.begin());
  double best_theta = best * step;
  double best_log = grid_logs[static_cast<std::size_t>(best)];

  double a = best_theta - step, b = best_theta + step;
  double c = b - kInvPhi * (b - a), d = a + kInvPhi * (b - a);
  double fc = log_modulus(c), fd = log_modulus(d);
  while (b - a > kAngularTolerance) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = log_modulus(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = log_modulus(d);
    }
  }
  const double mid = 0.5 * (a + b);
  const double fmid = log_modulus(mid);
  if (fmid > best_log) {
    best_log = fmid;
    best_theta = mid;
  }
  return {std::exp(best_log), std::polar(R, best_theta)};
}

double log_threshold(double epsilon) { return std::log(epsilon + kFeasibilitySlack); }

// Log-moduli of every sample point's Möbius factor on the objective grid and
// at every other sample point, so configurations are scored by table sums.
// Sums run over zeros in ascending sample index, which is also the order of
// zeros in the configurations built here; sup_on_disk and feasibility_margin
// therefore reproduce these values bit for bit.
class ConfigurationTable {
 public:
  explicit ConfigurationTable(const ExtremalProblem& prob, int nodes = kSupGridNodes)
      : prob_(prob), n_(prob.sample.size()), nodes_(nodes) {
    const double step = 2.0 * std::numbers::pi / nodes_;
    grid_.resize(n_ * static_cast<std::size_t>(nodes_));
    cons_.resize(n_ * n_);
    log_weight_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      const DiskPoint& a = prob.sample[i];
      for (int k = 0; k < nodes_; ++k)
        grid_[i * nodes_ + k] = blaschke_factor_log_modulus(a, std::polar(prob.R, k * step));
      for (std::size_t j = 0; j < n_; ++j) cons_[i * n_ + j] = blaschke_factor_log_modulus(a, prob.sample[j].value());
      log_weight_[i] = prob.weighted() ? std::log(weight_q(prob.sample[i].value())) : 0.0;
    }
  }

  std::size_t size() const noexcept { return n_; }
  int nodes() const noexcept { return nodes_; }
  double factor_on_grid(std::size_t zero, int node) const { return grid_[zero * nodes_ + node]; }
  double factor_at_sample(std::size_t zero, std::size_t point) const { return cons_[zero * n_ + point]; }
  double log_weight(std::size_t point) const { return log_weight_[point]; }

  std::vector<double> initial_grid() const { return std::vector<double>(static_cast<std::size_t>(nodes_), 0.0); }
  std::vector<double> initial_constraints() const { return log_weight_; }

  void add_zero(std::size_t zero, std::vector<double>& grid, std::vector<double>& cons) const {
    for (int k = 0; k < nodes_; ++k) grid[k] += grid_[zero * nodes_ + k];
    for (std::size_t j = 0; j < n_; ++j)
      if (cons[j] != kNegInf) cons[j] += cons_[zero * n_ + j];
  }

  bool feasible(std::span<const double> cons) const {
    return std::all_of(cons.begin(), cons.end(),
                       [&](double c) { return std::exp(c) <= prob_.epsilon + kFeasibilitySlack; });
  }

  // Sum of log-space constraint excess over the feasibility threshold.
  double excess(std::span<const double> cons) const {
    const double limit = log_threshold(prob_.epsilon);
    double s = 0.0;
    for (double c : cons)
      if (c > limit) s += c - limit;
    return s;
  }

  // sum_j min(1, excess removed at j / excess at j) between two constraint states.
  double relative_progress(std::span<const double> before, std::span<const double> after) const {
    const double limit = log_threshold(prob_.epsilon);
    double s = 0.0;
    for (std::size_t j = 0; j < before.size(); ++j) {
      if (!(before[j] > limit)) continue;
      s += after[j] > limit ? (before[j] - after[j]) / (before[j] - limit) : 1.0;
    }
    return s;
  }

  DiskMax objective(const std::vector<int>& mult, std::span<const double> grid) const {
    return refine_circle_max(grid, prob_.R, [&](double theta) {
      const Complex z = std::polar(prob_.R, theta);
      double acc = 0.0;
      for (std::size_t i = 0; i < n_; ++i)
        for (int r = 0; r < mult[i]; ++r) acc += blaschke_factor_log_modulus(prob_.sample[i], z);
      return acc;
    });
  }

  ZeroConfiguration configuration(const std::vector<int>& mult) const {
    std::vector<DiskPoint> zeros;
    for (std::size_t i = 0; i < n_; ++i)
      for (int r = 0; r < mult[i]; ++r) zeros.push_back(prob_.sample[i]);
    return ZeroConfiguration(std::move(zeros));
  }

 private:
  const ExtremalProblem& prob_;
  std::size_t n_;
  int nodes_;
  std::vector<double> grid_;
  std::vector<double> cons_;
  std::vector<double> log_weight_;
};

CertifiedBound make_bound(const ExtremalProblem& prob, const ZeroConfiguration& cfg, BoundKind kind) {
  const DiskMax m = sup_on_disk(cfg, prob.R);
  const FeasibilityReport f = feasibility_margin(cfg, prob);
  CertifiedBound out;
  out.value = m.value;
  out.kind = kind;
  out.certificate = cfg;
  out.argmax_point = m.argmax;
  out.residuals.max_constraint_violation = std::max(0.0, f.worst_value - prob.epsilon);
  out.residuals.norm_excess = 0.0;  // finite Blaschke products are inner
  return out;
}

CertifiedBound infeasible_bound(BoundKind kind) {
  CertifiedBound out;
  out.kind = kind;
  out.value = 0.0;
  return out;
}

// Configuration state for the local search: multiplicities plus cached scores.
struct Scored {
  std::vector<int> mult;
  bool feasible = false;
  double objective = 0.0;
  double excess = 0.0;
};

class Searcher {
 public:
  explicit Searcher(const ConfigurationTable& table)
      : table_(table), max_degree_(static_cast<int>(table.size()) + kDegreeAllowance) {}

  Scored score(const std::vector<int>& mult) {
    if (auto it = cache_.find(mult); it != cache_.end()) return it->second;
    std::vector<double> grid = table_.initial_grid();
    std::vector<double> cons = table_.initial_constraints();
    int degree = 0;
    for (std::size_t i = 0; i < mult.size(); ++i)
      for (int r = 0; r < mult[i]; ++r) {
        table_.add_zero(i, grid, cons);
        ++degree;
      }
    Scored s{mult, table_.feasible(cons), 0.0, table_.excess(cons)};
    s.objective = degree == 0 ? 1.0 : table_.objective(mult, grid).value;
    cache_.emplace(mult, s);
    return s;
  }

  // How greedy() picks among infeasible additions.
  enum class Repair {
    min_excess,     // smallest remaining excess
    ratio,          // most excess removed per unit of log-objective lost
    max_objective,  // largest objective among additions that reduce the excess
  };
  static constexpr Repair kRepairs[] = {Repair::min_excess, Repair::ratio, Repair::max_objective};

  // Adds zeros one at a time until feasible: a feasible addition with the
  // largest objective if one exists, otherwise an addition chosen by `rule`.
  // Ties go to the lowest sample index.
  std::optional<Scored> greedy(std::vector<int> mult, Repair rule = Repair::min_excess) {
    Scored current = score(mult);
    while (!current.feasible || total(current.mult) == 0) {
      std::optional<Scored> best_feasible, best_reducing;
      double best_key = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < mult.size(); ++i) {
        if (current.mult[i] >= kMaxMultiplicity || total(current.mult) >= max_degree_) continue;
        auto next = current.mult;
        ++next[i];
        Scored s = score(next);
        if (s.feasible) {
          if (!best_feasible || s.objective > best_feasible->objective) best_feasible = s;
          continue;
        }
        const bool empty = total(current.mult) == 0;
        const double removed = current.excess - s.excess;
        if (!empty && !(removed > 0.0)) continue;
        double key = 0.0;
        switch (rule) {
          case Repair::min_excess: key = -s.excess; break;
          case Repair::ratio: {
            const double lost = (empty ? 0.0 : std::log(current.objective)) - std::log(s.objective);
            key = removed / std::max(lost, 1e-12);
            break;
          }
          case Repair::max_objective: key = s.objective; break;
        }
        if (!best_reducing || key > best_key) {
          best_reducing = s;
          best_key = key;
        }
      }
      if (best_feasible) return best_feasible;
      if (!best_reducing) return std::nullopt;
      current = *best_reducing;
    }
    return current;
  }

  // Removes zeros while feasibility survives, each time the one whose
  // removal leaves the largest objective.
  Scored prune(Scored current) {
    while (current.feasible) {
      std::optional<Scored> best;
      for (std::size_t i = 0; i < current.mult.size(); ++i) {
        if (current.mult[i] == 0) continue;
        auto cand = current.mult;
        --cand[i];
        if (total(cand) == 0) continue;
        Scored s = score(cand);
        if (s.feasible && (!best || s.objective > best->objective)) best = s;
      }
      if (!best) break;
      current = *best;
    }
    return current;
  }

  // Covering construction aimed at the angle of grid node `node`: adds the
  // zero that removes the most constraint excess per unit of log-modulus lost
  // at that node, until feasible. Works on table sums only.
  // With `relative`, each constraint's share of the excess removed is measured
  // against its own remaining excess.
  std::optional<std::vector<int>> targeted(int node, bool relative, const std::vector<bool>& forbidden = {},
                                           std::vector<int> mult = {}) const {
    const std::size_t n = table_.size();
    if (mult.empty()) mult.assign(n, 0);
    std::vector<double> grid = table_.initial_grid(), cons = table_.initial_constraints();
    for (std::size_t i = 0; i < n; ++i)
      for (int r = 0; r < mult[i]; ++r) table_.add_zero(i, grid, cons);
    double excess = table_.excess(cons);
    while (!table_.feasible(cons) || total(mult) == 0) {
      if (total(mult) >= max_degree_) return std::nullopt;
      std::size_t pick = n;
      double best_key = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (mult[i] >= kMaxMultiplicity || (!forbidden.empty() && forbidden[i])) continue;
        std::vector<double> c = cons;
        for (std::size_t j = 0; j < n; ++j)
          if (c[j] != kNegInf) c[j] += table_.factor_at_sample(i, j);
        const double removed = relative ? table_.relative_progress(cons, c) : excess - table_.excess(c);
        const double lost = -table_.factor_on_grid(i, node);
        const double key = total(mult) == 0 && excess == 0.0 ? 1.0 / std::max(lost, 1e-300)
                                                             : removed / std::max(lost, 1e-300);
        if (key > best_key) {
          best_key = key;
          pick = i;
        }
      }
      if (pick == n || !(best_key > 0.0)) return std::nullopt;
      ++mult[pick];
      table_.add_zero(pick, grid, cons);
      excess = table_.excess(cons);
    }
    return mult;
  }

  // Best feasible repair of `mult` over all repair rules.
  std::optional<Scored> repair(const std::vector<int>& mult) {
    std::optional<Scored> best;
    for (Repair rule : kRepairs)
      if (auto r = greedy(mult, rule); r && (!best || r->objective > best->objective)) best = r;
    return best;
  }

  // Best improvement over remove / swap moves (an added zero can only lower
  // the objective), then over "remove one zero and repair" moves, which can
  // trade one zero for several. Returns the number of accepted moves.
  int local_search(Scored& current, int budget) {
    int moves = 0;
    while (moves < budget) {
      std::optional<Scored> best;
      const auto consider = [&](const Scored& s) {
        if (total(s.mult) == 0 || !s.feasible) return;
        const double bar = best ? best->objective : current.objective + kImprovementThreshold;
        if (best ? s.objective > bar : s.objective >= bar) best = s;
      };
      for (std::size_t i = 0; i < current.mult.size(); ++i) {
        if (current.mult[i] == 0) continue;
        auto cand = current.mult;
        --cand[i];
        if (total(cand) > 0) consider(score(cand));
        for (std::size_t j = 0; j < current.mult.size(); ++j) {
          if (j == i || cand[j] >= kMaxMultiplicity) continue;
          ++cand[j];
          if (total(cand) > 0) consider(score(cand));
          --cand[j];
        }
      }
      if (!best) {
        for (std::size_t i = 0; i < current.mult.size(); ++i) {
          if (current.mult[i] == 0) continue;
          auto cand = current.mult;
          --cand[i];
          for (Repair rule : kRepairs)
            if (auto r = greedy(cand, rule)) consider(*r);
        }
        for (std::size_t j = 0; j < current.mult.size(); ++j) {
          auto cand = current.mult;
          while (cand[j] < kMaxMultiplicity && total(cand) < max_degree_) {
            ++cand[j];
            consider(prune(score(cand)));
          }
        }
      }
      if (!best) break;
      current = *best;
      ++moves;
    }
    return moves;
  }

  static int total(const std::vector<int>& mult) {
    int s = 0;
    for (int m : mult) s += m;
    return s;
  }

 private:
  const ConfigurationTable& table_;
  int max_degree_;
  std::map<std::vector<int>, Scored> cache_;
};

// Exact search over angular intervals. On |z| = R the modulus of one factor
// b_a decreases with cos(theta - arg a), so its maximum over an interval of
// angles sits at the antipode of arg a if the interval contains it and at the
// farther endpoint otherwise. Summing these maxima bounds the objective of
// every configuration whose argmax lies in the interval, which turns each
// interval into a multicover problem: cover every constraint's excess at the
// least summed cost -max log|b_i|. Each is solved by depth-first branch and
// bound, pruning with single-constraint fractional knapsack bounds against
// the incumbent. Leaves are re-scored exactly.
class IntervalBranchAndBound {
 public:
  IntervalBranchAndBound(const ExtremalProblem& prob, const ConfigurationTable& table, Searcher& searcher,
                         long node_limit)
      : prob_(prob),
        table_(table),
        searcher_(searcher),
        n_(table.size()),
        max_degree_(static_cast<int>(table.size()) + kDegreeAllowance),
        node_limit_(node_limit),
        cover_(n_ * n_),
        need0_(n_),
        cost_(n_),
        order_(n_),
        rank_(n_),
        by_ratio_(n_, std::vector<std::size_t>(n_)),
        need_(n_ + 1, std::vector<double>(n_)),
        mult_(n_, 0),
        y_(n_ + 1, std::vector<double>(n_, 0.0)),
        mu_(n_ + 1, 0.0),
        grad_(n_, 0.0) {
    const double limit = log_threshold(prob.epsilon);
    const auto init = table.initial_constraints();
    for (std::size_t j = 0; j < n_; ++j) need0_[j] = init[j] - limit;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) cover_[i * n_ + j] = -table.factor_at_sample(i, j);
  }

  // Offers every improvement found; false when the node limit cut the search short.
  template <typename Offer>
  bool run(const std::optional<Scored>& incumbent, Offer offer) {
    incumbent_ = &incumbent;
    offer_ = [&](const Scored& s) { offer(s); };
    const int intervals = kIntervals;
    const double half = std::numbers::pi / intervals;
    for (int k = 0; k < intervals && !truncated_; ++k) {
      prepare_interval(2.0 * std::numbers::pi * k / intervals, half);
      need_[0] = need0_;
      std::fill(mult_.begin(), mult_.end(), 0);
      dfs(0, 0, 0.0);
    }
    return !truncated_;
  }


 private:
  static constexpr double kCoverTolerance = 1e-9;
  static constexpr int kLagrangianSteps = 12;
  static constexpr int kIntervals = 512;

  double bar() const {
    if (!*incumbent_) return -std::numeric_limits<double>::infinity();
    return std::log((*incumbent_)->objective + kImprovementThreshold) - 1e-12;
  }

  double interval_max(const DiskPoint& a, double center, double half) const {
    const auto f = [&](double theta) { return blaschke_factor_log_modulus(a, std::polar(prob_.R, theta)); };
    if (a.value() == Complex(0.0)) return std::log(prob_.R);
    const double antipode = std::arg(a.value()) + std::numbers::pi;
    const double d = std::abs(std::remainder(center - antipode, 2.0 * std::numbers::pi));
    const double u = d <= half ? f(antipode) : std::max(f(center - half), f(center + half));
    return u + 1e-14 + 1e-13 * std::abs(u);
  }

  void prepare_interval(double center, double half) {
    for (std::size_t i = 0; i < n_; ++i) cost_[i] = std::max(0.0, -interval_max(prob_.sample[i], center, half));
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    // Expensive points first: their choices move the objective most, so the bar tightens early.
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) { return cost_[a] > cost_[b]; });
    for (std::size_t d = 0; d < n_; ++d) rank_[order_[d]] = d;
    for (std::size_t j = 0; j < n_; ++j) {
      auto& v = by_ratio_[j];
      std::iota(v.begin(), v.end(), std::size_t{0});
      std::stable_sort(v.begin(), v.end(), [&](std::size_t a, std::size_t b) {
        return cost_[a] * cover_[b * n_ + j] < cost_[b] * cover_[a * n_ + j];
      });
    }
  }

  // Least cost of covering `need` at constraint j alone with the variables
  // not yet fixed, fractional except that an exact zero at the point costs one unit.
  double cover_cost(std::size_t j, std::size_t depth, double need) const {
    double exact = std::numeric_limits<double>::infinity();
    double total = 0.0, left = need;
    for (std::size_t i : by_ratio_[j]) {
      if (rank_[i] < depth) continue;
      const double c = cover_[i * n_ + j];
      if (std::isinf(c)) {
        exact = std::min(exact, cost_[i]);
        continue;
      }
      if (!(c > 0.0) || !(left > 0.0)) continue;
      const double units = std::min(double(kMaxMultiplicity), left / c);
      total += units * cost_[i];
      left -= units * c;
    }
    return left > kCoverTolerance ? exact : std::min(exact, total);
  }

  // Fractional knapsack bound on the sum of all constraints, each scaled to a
  // requirement of one, with a unit's cover capped at what is still needed.
  double surrogate_cost(std::size_t depth, const std::vector<double>& need) {
    double required = 0.0;
    for (std::size_t j = 0; j < n_; ++j)
      if (need[j] > kCoverTolerance) required += 1.0;
    if (required == 0.0) return 0.0;
    ratio_.clear();
    for (std::size_t d = depth; d < n_; ++d) {
      const std::size_t i = order_[d];
      double unit = 0.0;
      for (std::size_t j = 0; j < n_; ++j)
        if (need[j] > kCoverTolerance) unit += std::min(1.0, cover_[i * n_ + j] / need[j]);
      if (unit > 0.0) ratio_.push_back({cost_[i] / unit, unit});
    }
    std::sort(ratio_.begin(), ratio_.end());
    double total = 0.0, left = required;
    for (const auto& [per_unit_cover, unit] : ratio_) {
      const double units = std::min(double(kMaxMultiplicity), left / unit);
      total += units * unit * per_unit_cover;
      left -= units * unit;
      if (!(left > 1e-12)) return total;
    }
    return std::numeric_limits<double>::infinity();
  }

  // Lagrangian bound on the normalized multicover LP with the degree cap:
  // for multipliers y >= 0 (one per uncovered constraint) and mu >= 0,
  //   sum_j y_j - mu D + sum_i 4 min(0, cost_i + mu - sum_j a_ij y_j)
  // is a lower bound. Polyak subgradient steps aim at `target`, the cost
  // that would prune the node; multipliers are inherited from the parent.
  double lagrangian_cost(std::size_t depth, int degree, const std::vector<double>& need, double target) {
    std::vector<double>& y = y_[depth];
    if (depth > 0) {
      y = y_[depth - 1];
      mu_[depth] = mu_[depth - 1];
    } else {
      std::fill(y.begin(), y.end(), 0.0);
      mu_[0] = 0.0;
    }
    double& mu = mu_[depth];
    const double cap = max_degree_ - degree;
    for (std::size_t j = 0; j < n_; ++j) {
      const double a_row = need[j] > kCoverTolerance ? 1.0 : 0.0;
      if (a_row == 0.0) y[j] = 0.0;
    }
    double best = 0.0;
    std::vector<double>& g = grad_;
    for (int it = 0; it < kLagrangianSteps; ++it) {
      double value = -mu * cap;
      std::fill(g.begin(), g.end(), 0.0);
      double g_mu = -cap;
      for (std::size_t j = 0; j < n_; ++j)
        if (need[j] > kCoverTolerance) {
          value += y[j];
          g[j] = 1.0;
        }
      for (std::size_t d = depth; d < n_; ++d) {
        const std::size_t i = order_[d];
        double reduced = cost_[i] + mu;
        for (std::size_t j = 0; j < n_; ++j)
          if (y[j] > 0.0) reduced -= y[j] * std::min(1.0, cover_[i * n_ + j] / need[j]);
        if (reduced < 0.0) {
          value += kMaxMultiplicity * reduced;
          g_mu += kMaxMultiplicity;
          for (std::size_t j = 0; j < n_; ++j)
            if (need[j] > kCoverTolerance) g[j] -= kMaxMultiplicity * std::min(1.0, cover_[i * n_ + j] / need[j]);
        }
      }
      best = std::max(best, value);
      if (best >= target) break;
      double norm2 = 0.0;
      for (std::size_t j = 0; j < n_; ++j)
        if (need[j] > kCoverTolerance && !(y[j] == 0.0 && g[j] < 0.0)) norm2 += g[j] * g[j];
      if (!(mu == 0.0 && g_mu < 0.0)) norm2 += g_mu * g_mu;
      if (!(norm2 > 0.0)) break;
      const double step = (target - value) / norm2;
      for (std::size_t j = 0; j < n_; ++j)
        if (need[j] > kCoverTolerance) y[j] = std::max(0.0, y[j] + step * g[j]);
      mu = std::max(0.0, mu + step * g_mu);
    }
    return best;
  }

  void dfs(std::size_t depth, int degree, double cost) {
    if (truncated_) return;
    if (++nodes_ > node_limit_) {
      truncated_ = true;
      return;
    }
    const std::vector<double>& need = need_[depth];
    const double bar_now = bar();
    if (-cost < bar_now) return;

    bool covered = degree > 0;
    for (std::size_t j = 0; j < n_ && covered; ++j) covered = need[j] <= kCoverTolerance;
    if (covered) {
      Scored s = searcher_.score(mult_);
      if (s.feasible) {
        offer_(s);
        return;  // extensions only lower the objective
      }
    }
    if (depth == n_ || degree >= max_degree_) return;

    double lb = surrogate_cost(depth, need);
    if (-(cost + lb) < bar_now) return;
    lb = std::max(lb, lagrangian_cost(depth, degree, need, -bar_now - cost));
    if (-(cost + lb) < bar_now) return;
    for (std::size_t j = 0; j < n_; ++j)
      if (need[j] > kCoverTolerance) lb = std::max(lb, cover_cost(j, depth, need[j]));
    if (-(cost + lb) < bar_now) return;

    const std::size_t i = order_[depth];
    std::vector<double>& next = need_[depth + 1];
    const int top = std::min(kMaxMultiplicity, max_degree_ - degree);
    for (int step = 0; step <= top; ++step) {
      const int m = top - step;
      for (std::size_t j = 0; j < n_; ++j)
        next[j] = m == 0 ? need[j] : need[j] - m * cover_[i * n_ + j];
      mult_[i] = m;
      dfs(depth + 1, degree + m, cost + m * cost_[i]);
      if (truncated_) break;
    }
    mult_[i] = 0;
  }

  const ExtremalProblem& prob_;
  const ConfigurationTable& table_;
  Searcher& searcher_;
  std::size_t n_;
  int max_degree_;
  long node_limit_;
  long nodes_ = 0;
  bool truncated_ = false;
  std::vector<double> cover_;  // -log|b_i(zeta_j)|, row i
  std::vector<double> need0_;  // constraint excess of the empty configuration
  std::vector<double> cost_;   // -max log|b_i| over the current interval
  std::vector<std::size_t> order_, rank_;
  std::vector<std::vector<std::size_t>> by_ratio_;
  std::vector<std::vector<double>> need_;
  std::vector<int> mult_;
  std::vector<std::pair<double, double>> ratio_;
  std::vector<std::vector<double>> y_;  // Lagrange multipliers per depth
  std::vector<double> mu_, grad_;  // (cost per unit of cover, cover per unit)
  const std::optional<Scored>* incumbent_ = nullptr;
  std::function<void(const Scored&)> offer_;
};

std::vector<int> multiplicities_of(const ZeroConfiguration& cfg, const PointSample& sample) {
  std::vector<int> mult(sample.size(), 0);
  for (const auto& z : cfg.zeros()) {
    auto it = std::find(sample.points().begin(), sample.points().end(), z);
    if (it == sample.points().end())
      throw ValidationError("warm start zero " + format_double(z.re()) + "+" + format_double(z.im()) +
                            "i is not a sample point");
    ++mult[static_cast<std::size_t>(it - sample.points().begin())];
  }
  for (int& m : mult) m = std::min(m, kMaxMultiplicity);
  return mult;
}

}  // namespace

std::string to_string(ConstraintMode mode) { return mode == ConstraintMode::weighted ? "weighted" : "plain"; }

ConstraintMode constraint_mode_from_string(const std::string& name) {
  if (name == "weighted") return ConstraintMode::weighted;
  if (name == "plain") return ConstraintMode::plain;
  throw ValidationError("unknown constraint mode '" + name + "' (expected weighted|plain)");
}

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::lower_certified: return "lower_certified";
    case BoundKind::heuristic: return "heuristic";
    case BoundKind::oracle_exact: return "oracle_exact";
  }
  return "unknown";
}

BoundKind bound_kind_from_string(const std::string& name) {
  for (auto k : {BoundKind::lower_certified, BoundKind::heuristic, BoundKind::oracle_exact})
    if (to_string(k) == name) return k;
  throw ValidationError("unknown bound kind '" + name + "'");
}

void ExtremalProblem::validate() const {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
    throw ValidationError("ExtremalProblem: epsilon must be finite and >= 0, got " + format_double(epsilon));
  if (!(R > 0.0 && R < 1.0)) throw ValidationError("ExtremalProblem: R must lie in (0, 1), got " + format_double(R));
}

DiskMax sup_on_disk(const ZeroConfiguration& cfg, double R, int nodes) {
  if (!(R > 0.0 && R < 1.0)) throw DomainError("sup_on_disk: R must lie in (0, 1), got " + format_double(R));
  if (nodes < 3) throw DomainError("sup_on_disk: at least 3 grid nodes are required");
  const auto log_modulus = [&](double theta) { return product_log_modulus(cfg, std::polar(R, theta), false); };
  const double step = 2.0 * std::numbers::pi / nodes;
  std::vector<double> grid(static_cast<std::size_t>(nodes), 0.0);
  for (int k = 0; k < nodes; ++k) {
    const Complex z = std::polar(R, k * step);
    for (const auto& a : cfg.zeros()) grid[k] += blaschke_factor_log_modulus(a, z);
  }
  return refine_circle_max(grid, R, log_modulus);
}

FeasibilityReport feasibility_margin(const ZeroConfiguration& cfg, const ExtremalProblem& prob) {
  FeasibilityReport rep{true, -1, Complex{}, 0.0};
  for (std::size_t j = 0; j < prob.sample.size(); ++j) {
    const Complex zeta = prob.sample[j].value();
    const double v = std::exp(product_log_modulus(cfg, zeta, prob.weighted()));
    if (rep.worst_index < 0 || v > rep.worst_value) rep = {true, static_cast<int>(j), zeta, v};
  }
  rep.feasible = rep.worst_value <= prob.epsilon + kFeasibilitySlack;
  return rep;
}

CertifiedBound brute_force_g(const ExtremalProblem& prob, int max_degree) {
  prob.validate();
  const std::size_t n = prob.sample.size();
  if (n > kBruteForceMaxSample)
    throw ValidationError("brute_force_g: sample size " + std::to_string(n) + " exceeds the cap of " +
                          std::to_string(kBruteForceMaxSample));
  if (max_degree < 1 || max_degree > static_cast<int>(n) + 4)
    throw ValidationError("brute_force_g: max_degree must lie in [1, |sample| + 4], got " + std::to_string(max_degree));

  const ConfigurationTable table(prob);
  const double limit = log_threshold(prob.epsilon);

  // suffix[k][j]: most negative change to constraint j achievable with the
  // points k..n-1 at full multiplicity (degree cap ignored, so this is a bound).
  std::vector<std::vector<double>> suffix(n + 1, std::vector<double>(n, 0.0));
  for (std::size_t k = n; k-- > 0;)
    for (std::size_t j = 0; j < n; ++j) suffix[k][j] = suffix[k + 1][j] + kMaxMultiplicity * table.factor_at_sample(k, j);

  std::vector<int> mult(n, 0);
  std::optional<std::vector<int>> best_mult;
  double best_value = -1.0;

  // Recursion over sample index; the state vectors carry the accumulated logs.
  const auto explore = [&](auto&& self, std::size_t k, int degree, const std::vector<double>& grid,
                           const std::vector<double>& cons) -> void {
    if (k == n) return;
    for (std::size_t j = 0; j < n; ++j)
      if (cons[j] + suffix[k][j] > limit) return;  // no completion is feasible

    self(self, k + 1, degree, grid, cons);  // multiplicity 0 at k
    std::vector<double> g = grid, c = cons;
    for (int m = 1; m <= kMaxMultiplicity && degree + m <= max_degree; ++m) {
      table.add_zero(k, g, c);
      mult[k] = m;
      const double value = table.objective(mult, g).value;
      if (table.feasible(c)) {
        if (value > best_value) {
          best_value = value;
          best_mult = mult;
        }
        break;  // more zeros only lower the objective
      }
      if (value < best_value - 1e-10) break;  // completions cannot beat the incumbent
      self(self, k + 1, degree + m, g, c);
    }
    mult[k] = 0;
  };
  explore(explore, 0, 0, table.initial_grid(), table.initial_constraints());

  if (!best_mult) return infeasible_bound(BoundKind::oracle_exact);
  return make_bound(prob, table.configuration(*best_mult), BoundKind::oracle_exact);
}

CertifiedBound search_g(const ExtremalProblem& prob, const SearchOptions& options) {
  prob.validate();
  const std::size_t n = prob.sample.size();
  if (n == 0) return infeasible_bound(BoundKind::lower_certified);
  const ConfigurationTable table(prob);
  Searcher searcher(table);
  int budget = std::max(0, options.budget);

  std::optional<Scored> incumbent;
  const auto offer = [&](const Scored& s) {
    if (s.feasible && Searcher::total(s.mult) > 0 &&
        (!incumbent || s.objective >= incumbent->objective + kImprovementThreshold))
      incumbent = s;
  };

  // best feasible singleton
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<int> single(n, 0);
    single[i] = 1;
    offer(searcher.score(single));
  }

  for (auto rule : Searcher::kRepairs)
    if (auto start = searcher.greedy(std::vector<int>(n, 0), rule)) {
      budget -= searcher.local_search(*start, budget);
      offer(*start);
    }
  for (int node = 0; node < table.nodes(); node += table.nodes() / kTargetedAngles)
    for (bool relative : {false, true})
      if (auto mult = searcher.targeted(node, relative)) {
        Scored start = searcher.prune(searcher.score(*mult));
        budget -= searcher.local_search(start, budget);
        offer(start);
      }
  if (options.warm_start) {
    Scored warm = searcher.score(multiplicities_of(*options.warm_start, prob.sample));
    if (warm.feasible) {
      budget -= searcher.local_search(warm, budget);
      offer(warm);
    }
  }

  // Ruin and recreate: forbid one or two indices of the incumbent's support
  // and rebuild with the targeted cover at every targeted angle.
  if (incumbent) {
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < n; ++i)
      if (incumbent->mult[i] > 0) support.push_back(i);
    std::optional<Scored> rebuilt;
    const auto rebuild = [&](const std::vector<bool>& forbidden) {
      for (int node = 0; node < table.nodes(); node += table.nodes() / kTargetedAngles)
        for (bool relative : {false, true})
          if (auto mult = searcher.targeted(node, relative, forbidden)) {
            Scored s = searcher.prune(searcher.score(*mult));
            if (s.feasible && (!rebuilt || s.objective > rebuilt->objective)) rebuilt = s;
          }
    };
    for (std::size_t a = 0; a < support.size(); ++a) {
      std::vector<bool> forbidden(n, false);
      forbidden[support[a]] = true;
      rebuild(forbidden);
      if (support.size() > kRuinPairLimit) continue;
      for (std::size_t b = a + 1; b < support.size(); ++b) {
        forbidden[support[b]] = true;
        rebuild(forbidden);
        forbidden[support[b]] = false;
      }
    }
    if (rebuilt) {
      budget -= searcher.local_search(*rebuilt, budget);
      offer(*rebuilt);
    }
  }

  // Perturbation restarts: either drop up to two zeros of the incumbent,
  // insert a random point and repair greedily, or clear one to three of its
  // indices and rebuild them away with the targeted cover at a random angle.
  // Each restart ends in a local descent.
  Rng rng(options.seed);
  while (incumbent && budget > 0) {
    --budget;
    std::vector<int> mult = incumbent->mult;
    std::vector<std::size_t> present;
    for (std::size_t i = 0; i < n; ++i)
      if (mult[i] > 0) present.push_back(i);
    std::optional<Scored> next;
    if (rng.below(2) == 0) {
      const int drops = 1 + static_cast<int>(rng.below(2));
      for (int d = 0; d < drops && !present.empty(); ++d) {
        const std::size_t k = rng.below(present.size());
        if (--mult[present[k]] == 0) present.erase(present.begin() + static_cast<std::ptrdiff_t>(k));
      }
      const std::size_t insert = rng.below(n);
      if (mult[insert] < kMaxMultiplicity && Searcher::total(mult) < static_cast<int>(n) + kDegreeAllowance)
        ++mult[insert];
      next = searcher.repair(mult);
    } else {
      std::vector<bool> forbidden(n, false);
      const int clears = 1 + static_cast<int>(rng.below(3));
      for (int d = 0; d < clears && !present.empty(); ++d) {
        const std::size_t k = rng.below(present.size());
        forbidden[present[k]] = true;
        mult[present[k]] = 0;
        present.erase(present.begin() + static_cast<std::ptrdiff_t>(k));
      }
      const int node = static_cast<int>(rng.below(static_cast<std::uint64_t>(table.nodes())));
      const bool relative = rng.below(2) == 1;
      if (auto rebuilt = searcher.targeted(node, relative, forbidden, mult)) next = searcher.prune(searcher.score(*rebuilt));
    }
    if (next && next->feasible) {
      budget -= searcher.local_search(*next, budget);
      offer(*next);
    }
  }

  // Beyond kExactSampleLimit points the node limit is usually reached first.
  if (n <= kExactSampleLimit) {
    IntervalBranchAndBound exact(prob, table, searcher, kNodesPerBudgetUnit * std::max(1, options.budget));
    exact.run(incumbent, offer);
  }

  if (!incumbent) return infeasible_bound(BoundKind::lower_certified);
  return make_bound(prob, table.configuration(incumbent->mult), BoundKind::lower_certified);
}

void revalidate_blaschke_certificate(const CertifiedBound& bound, const ExtremalProblem& prob,
                                     double value_tolerance) {
  if (bound.infeasible()) throw ValidationError("certificate re-validation: bound carries no configuration");
  const FeasibilityReport f = feasibility_margin(*bound.certificate, prob);
  if (!f.feasible)
    throw ValidationError("certificate re-validation: constraint value " + format_double(f.worst_value) +
                          " at sample point " + std::to_string(f.worst_index) + " exceeds epsilon " +
                          format_double(prob.epsilon));
  const DiskMax m = sup_on_disk(*bound.certificate, prob.R);
  if (std::abs(m.value - bound.value) > value_tolerance)
    throw ValidationError("certificate re-validation: objective " + format_double(m.value) +
                          " does not reproduce the reported value " + format_double(bound.value));
}

}  // namespace hardy
