#include "shp/elections.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/students_t.hpp>

namespace shp {

double ElectionReturns::compute_statewide_mean(const AdjacencyGraph& g,
                                               const std::vector<std::vector<double>>& share) {
    double total = 0.0;
    const double pop = static_cast<double>(g.total_population());
    for (const auto& e : share) {
        double s = 0.0;
        for (int i = 0; i < g.num_blocks(); ++i) s += e[i] * static_cast<double>(g.block(i).population);
        total += s / pop;
    }
    return total / static_cast<double>(share.size());
}

DistrictStats district_stats(const AdjacencyGraph& graph, const ElectionReturns& returns,
                             const std::vector<int>& region) {
    if (region.empty()) throw ValidationError("empty region");
    const int ne = returns.num_elections();
    if (ne < 2) throw ValidationError("district_stats requires at least 2 elections");

    double pop = 0.0;
    for (int b : region) pop += static_cast<double>(graph.block(b).population);

    std::vector<double> v(ne, 0.0);
    for (int e = 0; e < ne; ++e) {
        double s = 0.0;
        for (int b : region) s += returns.share[e][b] * static_cast<double>(graph.block(b).population);
        v[e] = pop > 0.0 ? s / pop : 0.5;
    }
    DistrictStats st;
    for (double x : v) st.mu += x;
    st.mu /= ne;
    double ss = 0.0;
    for (double x : v) ss += (x - st.mu) * (x - st.mu);
    st.sigma = std::sqrt(ss / (ne - 1));
    st.dof = ne - 1;
    return st;
}

double win_probability(const DistrictStats& stats) {
    if (stats.sigma <= 0.0) {
        if (stats.mu > 0.5) return 1.0;
        if (stats.mu < 0.5) return 0.0;
        return 0.5;
    }
    boost::math::students_t dist(static_cast<double>(stats.dof));
    return boost::math::cdf(dist, (stats.mu - 0.5) / stats.sigma);
}

namespace {
double clip01(double x) { return std::clamp(x, 0.0, 1.0); }
}  // namespace

double seat_vote_target(const SeatVoteCurve& curve, double vote_share) {
    switch (curve.kind) {
        case CurveKind::EfficiencyGap:
            return clip01(2.0 * vote_share - 0.5);
        case CurveKind::Proportional:
            return clip01(vote_share);
        case CurveKind::Responsiveness:
            return clip01(curve.responsiveness * (vote_share - 0.5) + 0.5);
        case CurveKind::Table: {
            const auto& t = curve.table;
            if (t.empty()) throw ValidationError("empty seat-vote table");
            if (vote_share <= t.front().first) return clip01(t.front().second);
            if (vote_share >= t.back().first) return clip01(t.back().second);
            for (std::size_t i = 1; i < t.size(); ++i) {
                if (vote_share <= t[i].first) {
                    const double f = (vote_share - t[i - 1].first) / (t[i].first - t[i - 1].first);
                    return clip01(t[i - 1].second + f * (t[i].second - t[i - 1].second));
                }
            }
            return clip01(t.back().second);
        }
    }
    return 0.5;
}

double district_cost(const AdjacencyGraph& graph, const ElectionReturns& returns,
                     const std::vector<int>& region, const SeatVoteCurve& curve) {
    const double target = seat_vote_target(curve, returns.statewide_mean);
    return target - win_probability(district_stats(graph, returns, region));
}

double expected_seat_share(const AdjacencyGraph& graph, const ElectionReturns& returns,
                           const std::vector<std::vector<int>>& plan) {
    if (plan.empty()) throw ValidationError("empty plan");
    double s = 0.0;
    for (const auto& d : plan) s += win_probability(district_stats(graph, returns, d));
    return s / static_cast<double>(plan.size());
}

double expected_seat_swaps(const std::vector<double>& win_probs) {
    double s = 0.0;
    for (double p : win_probs) s += 2.0 * p * (1.0 - p);
    return s;
}

double expected_seat_swaps(const AdjacencyGraph& graph, const ElectionReturns& returns,
                           const std::vector<std::vector<int>>& plan) {
    std::vector<double> probs;
    probs.reserve(plan.size());
    for (const auto& d : plan) probs.push_back(win_probability(district_stats(graph, returns, d)));
    return expected_seat_swaps(probs);
}

}  // namespace shp
