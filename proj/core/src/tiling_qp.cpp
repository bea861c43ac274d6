#include "selfsim/tiling_qp.hpp"

#include "selfsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <thread>

namespace selfsim {

namespace {

long checked_abs_odd(long p) {
    const long q = p < 0 ? -p : p;
    if (q < 3 || q % 2 == 0) throw InvalidParameter("balanced digits need |p| odd and >= 3, got p = " + std::to_string(p));
    return q;
}

unsigned worker_count(unsigned requested, std::size_t jobs) {
    unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

/// sum over t >= from of digits[t] p^t
BigInt high_part(const BalancedDigits& digits, long p, std::size_t from) {
    BigInt v = 0;
    for (std::size_t t = digits.size(); t > from; --t) v = v * p + digits[t - 1];
    return v * ipow(p, from);
}

}  // namespace

BalancedDigits balanced_digits(const BigInt& n, long p) {
    const long q = checked_abs_odd(p);
    const long m = (q - 1) / 2;
    BalancedDigits out;
    BigInt rest = n;
    BigInt r;
    while (rest != 0) {
        mpz_fdiv_r_ui(r.get_mpz_t(), rest.get_mpz_t(), static_cast<unsigned long>(q));
        long t = r.get_si();
        if (t > m) t -= q;
        out.push_back(t);
        rest -= t;
        mpz_divexact(rest.get_mpz_t(), rest.get_mpz_t(), BigInt(p).get_mpz_t());
    }
    return out;
}

BigInt balanced_value(const BalancedDigits& digits, long p) {
    BigInt v = 0;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) v = v * p + *it;
    return v;
}

BigInt hat(const BigInt& m1, long p) {
    BalancedDigits d = balanced_digits(m1, p);
    for (long& t : d) t = (t % 2 != 0) ? 1 : 0;
    return balanced_value(d, p);
}

bool TranslateSet::contains(const Point2& t) const {
    return std::binary_search(points.begin(), points.end(), t);
}

TranslateSet dset_k(const ShiftParams& params, long k, std::size_t budget) {
    if (k < 1) throw InvalidParameter("patch level must be >= 1, got " + std::to_string(k));
    const ShiftParams checked = ShiftParams::make(params.p, params.eps);
    const long q = checked.p < 0 ? -checked.p : checked.p;
    const BigInt size = ipow(q, static_cast<unsigned long>(2 * k));
    if (size > BigInt(static_cast<unsigned long>(budget))) {
        throw ResourceError("D_" + std::to_string(k) + " has " + size.get_str() + " points, budget is " +
                            std::to_string(budget));
    }
    const DigitSet ds = build_shift_digits(checked);
    std::vector<Point2> level(ds.digits.begin(), ds.digits.end());
    std::sort(level.begin(), level.end());

    const Rational scale(checked.p);
    for (long l = 2; l <= k; ++l) {
        const std::size_t nd = ds.size();
        std::vector<Point2> next(nd * level.size());
        const unsigned workers = worker_count(0, nd);
        {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    for (std::size_t d = w; d < nd; d += workers) {
                        for (std::size_t t = 0; t < level.size(); ++t) {
                            next[d * level.size() + t] = ds.digits[d] + level[t] * scale;
                        }
                    }
                });
            }
        }
        std::sort(next.begin(), next.end());
        if (std::adjacent_find(next.begin(), next.end()) != next.end()) {
            throw ConsistencyError("D_" + std::to_string(l) + " has coinciding translates");
        }
        level = std::move(next);
    }
    return TranslateSet{k, std::move(level)};
}

std::optional<std::pair<BigInt, BigInt>> closed_form_coordinates(const ShiftParams& params, const Point2& t) {
    const ShiftParams checked = ShiftParams::make(params.p, params.eps);
    if (!t.y.is_integer()) return std::nullopt;
    const BigInt m1 = t.y.num();
    const Rational rest = t.x - Rational(hat(m1, checked.p)) * checked.eps;
    if (!rest.is_integer()) return std::nullopt;
    return std::make_pair(m1, rest.num());
}

bool in_dset(const ShiftParams& params, long k, const Point2& t) {
    const auto mm = closed_form_coordinates(params, t);
    if (!mm) return false;
    const auto len = static_cast<std::size_t>(k);
    return balanced_digits(mm->first, params.p).size() <= len && balanced_digits(mm->second, params.p).size() <= len;
}

bool self_replication_check(const ShiftParams& params, const TranslateSet& level, const TranslateSet& next,
                            const Point2& t) {
    if (next.level != level.level + 1) throw InvalidParameter("self-replication needs consecutive levels");
    if (!level.contains(t)) {
        throw DomainError("(" + t.x.str() + ", " + t.y.str() + ") is not in D_" + std::to_string(level.level));
    }
    const DigitSet ds = build_shift_digits(params);
    const Point2 at = t * Rational(params.p);
    return std::all_of(ds.digits.begin(), ds.digits.end(), [&](const Point2& d) { return next.contains(at + d); });
}

bool self_replication_check(const ShiftParams& params, long k, const Point2& t) {
    return self_replication_check(params, dset_k(params, k), dset_k(params, k + 1), t);
}

CensusReport local_finiteness_census(const ShiftParams& params, const Rational& c, long k, std::size_t arity,
                                     unsigned threads) {
    if (c.sign() <= 0) throw InvalidParameter("census box side must be positive");
    if (arity < 2) throw InvalidParameter("census arity must be >= 2");
    const ShiftParams checked = ShiftParams::make(params.p, params.eps);
    const TranslateSet patch = dset_k(checked, k);

    // Rows are integer ordinates; each row keeps its abscissae sorted.
    std::map<BigInt, std::vector<Rational>> rows;
    for (const Point2& t : patch.points) rows[t.y.num()].push_back(t.x);

    // A configuration fits in a box of side c iff its bounding box does; each
    // one is enumerated once, from its least point.
    const std::size_t n = patch.points.size();
    const unsigned workers = worker_count(threads, n);
    std::vector<std::set<std::vector<Point2>>> found(workers);
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                std::vector<Point2> window;
                std::vector<std::size_t> pick(arity);
                for (std::size_t a = w; a < n; a += workers) {
                    const Point2& anchor = patch.points[a];
                    window.clear();
                    const Rational xlo = anchor.x - c;
                    const Rational xhi = anchor.x + c;
                    auto row = rows.lower_bound((anchor.y - c).ceil());
                    const BigInt ylast = (anchor.y + c).floor();
                    for (; row != rows.end() && row->first <= ylast; ++row) {
                        const auto& xs = row->second;
                        for (auto it = std::lower_bound(xs.begin(), xs.end(), xlo); it != xs.end() && *it <= xhi; ++it) {
                            const Point2 z{*it, Rational(row->first)};
                            if (anchor < z) window.push_back(z);
                        }
                    }
                    std::sort(window.begin(), window.end());
                    const std::size_t more = arity - 1;
                    if (window.size() < more) continue;
                    for (std::size_t i = 0; i < more; ++i) pick[i] = i;
                    while (true) {
                        Rational x0 = anchor.x, x1 = anchor.x, y0 = anchor.y, y1 = anchor.y;
                        std::vector<Point2> cls;
                        cls.reserve(more);
                        for (std::size_t i = 0; i < more; ++i) {
                            const Point2& z = window[pick[i]];
                            x0 = std::min(x0, z.x);
                            x1 = std::max(x1, z.x);
                            y0 = std::min(y0, z.y);
                            y1 = std::max(y1, z.y);
                            cls.push_back(z - anchor);
                        }
                        if (x1 - x0 <= c && y1 - y0 <= c) found[w].insert(std::move(cls));
                        std::size_t i = more;
                        while (i > 0 && pick[i - 1] == window.size() - more + (i - 1)) --i;
                        if (i == 0) break;
                        ++pick[i - 1];
                        for (std::size_t j = i; j < more; ++j) pick[j] = pick[j - 1] + 1;
                    }
                }
            });
        }
    }
    for (unsigned w = 1; w < workers; ++w) found[0].merge(found[w]);

    CensusReport r;
    r.level = k;
    r.box_side = c;
    r.arity = arity;
    r.boxes = n;
    r.classes = found[0].size();
    if (arity == 2) {
        const BigInt side = 2 * c.ceil() + 1;
        r.bound = BigInt(side * checked.eps.den() * side);
    }
    return r;
}

long double WitnessPair::distance() const {
    return std::hypot(tx2 - tx, ty2 - ty);
}

std::vector<WitnessPair> irrational_witness_pairs(long p, long double eps, long k_max) {
    if (p < 3 || p % 2 == 0) throw InvalidParameter("witness pairs need odd p >= 3, got " + std::to_string(p));
    if (k_max < 1 || k_max > 30) throw InvalidParameter("k_max must be in [1, 30]");
    const long m = (p - 1) / 2;
    std::vector<WitnessPair> out;
    long double pk = 1;
    for (long k = 1; k <= k_max; ++k) {
        pk *= static_cast<long double>(p);
        const long double m1 = (pk - 1) / 2;
        const long double n1 = (pk + 1) / 2;
        const long double n2 = 0;
        const long double m2 = std::floor(n2 + eps * pk);
        // Odd m: both hat values carry the common term 1 + p + ... + p^(k-1).
        const long double common = (m % 2 != 0) ? eps * (pk - 1) / static_cast<long double>(p - 1) : 0;
        out.push_back(WitnessPair{k, m2 + common, m1, n2 + eps * pk + common, n1});
    }
    return out;
}

std::size_t distinct_x_differences(const std::vector<WitnessPair>& pairs, long double resolution) {
    std::vector<long double> xs;
    for (const WitnessPair& w : pairs) xs.push_back(w.x_difference());
    std::sort(xs.begin(), xs.end());
    std::size_t classes = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i == 0 || xs[i] - xs[i - 1] > resolution) ++classes;
    }
    return classes;
}

QuasiPeriodicReport is_quasi_periodic(const ShiftParams& params, const Rational& c, long k) {
    const ShiftParams checked = ShiftParams::make(params.p, params.eps);
    QuasiPeriodicReport r;
    r.p = checked.p;
    r.eps = checked.eps.str();
    r.census = local_finiteness_census(checked, c, k);
    if (BigInt(static_cast<unsigned long>(r.census->classes)) > *r.census->bound) {
        throw ConsistencyError("census found " + std::to_string(r.census->classes) + " classes, above the bound " +
                               r.census->bound->get_str());
    }
    r.distinct_classes = r.census->classes;
    return r;
}

QuasiPeriodicReport is_quasi_periodic_demo(long p, long double eps, const std::string& eps_text, long k_max) {
    QuasiPeriodicReport r;
    r.p = p;
    r.eps = eps_text;
    r.certified = false;
    r.witnesses = irrational_witness_pairs(p, eps, k_max);
    r.distinct_classes = distinct_x_differences(r.witnesses);
    r.quasi_periodic = r.distinct_classes + 1 < static_cast<std::size_t>(k_max);
    return r;
}

LocalIsomorphismReport local_isomorphism_check(const ShiftParams& params, long ell, const std::vector<Point2>& sigma,
                                               const std::vector<Point2>& centres) {
    if (ell < 1) throw InvalidParameter("local isomorphism level must be >= 1");
    const ShiftParams checked = ShiftParams::make(params.p, params.eps);
    for (const Point2& s : sigma) {
        if (!in_dset(checked, ell, s)) throw DomainError("sigma is not contained in D_" + std::to_string(ell));
    }
    const long q = checked.p < 0 ? -checked.p : checked.p;
    const Box hull = attractor_bounds(build_shift_digits(checked));
    const Rational grow(ipow(q, static_cast<unsigned long>(ell)));
    const Rational w = hull.x.width() * grow;
    const Rational h = hull.y.width() * grow;

    LocalIsomorphismReport r;
    r.level = ell;
    r.radius_squared = Rational(9) * (w * w + h * h);
    const auto low = static_cast<std::size_t>(ell);
    for (const Point2& x : centres) {
        const auto mm = closed_form_coordinates(checked, x);
        if (!mm || !in_dset(checked, ell + 2, x)) throw DomainError("ball centre is not in D_" + std::to_string(ell + 2));
        const BigInt y_high = high_part(balanced_digits(mm->first, checked.p), checked.p, low);
        const BigInt x_high = high_part(balanced_digits(mm->second, checked.p), checked.p, low);
        const Point2 shift{Rational(x_high) + Rational(hat(y_high, checked.p)) * checked.eps, Rational(y_high)};
        ++r.balls;
        const bool ok = std::all_of(sigma.begin(), sigma.end(), [&](const Point2& s) {
            const Point2 t = shift + s;
            const Point2 v = t - x;
            return in_dset(checked, ell + 2, t) && v.x * v.x + v.y * v.y <= r.radius_squared;
        });
        if (ok) ++r.contained;
    }
    return r;
}

nlohmann::json to_json(const CensusReport& r) {
    nlohmann::json j{{"level", r.level}, {"box_side", r.box_side.str()}, {"arity", r.arity},
                     {"boxes", r.boxes}, {"classes", r.classes}};
    j["bound"] = r.bound ? nlohmann::json(r.bound->get_str()) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json to_json(const QuasiPeriodicReport& r) {
    nlohmann::json j{{"p", r.p},
                     {"eps", r.eps},
                     {"verdict", r.quasi_periodic ? "QuasiPeriodic" : "NotQuasiPeriodic"},
                     {"quasi_periodic", r.quasi_periodic},
                     {"certified", r.certified},
                     {"distinct_classes", r.distinct_classes}};
    if (r.census) j["census"] = to_json(*r.census);
    if (!r.witnesses.empty()) {
        nlohmann::json pairs = nlohmann::json::array();
        for (const WitnessPair& w : r.witnesses) {
            pairs.push_back({{"k", w.k},
                             {"t", {static_cast<double>(w.tx), static_cast<double>(w.ty)}},
                             {"t_prime", {static_cast<double>(w.tx2), static_cast<double>(w.ty2)}},
                             {"distance", static_cast<double>(w.distance())},
                             {"x_difference", static_cast<double>(w.x_difference())}});
        }
        j["witness_pairs"] = std::move(pairs);
    }
    return j;
}

std::string patch_text(const TranslateSet& set) {
    std::string out;
    for (const Point2& t : set.points) {
        out += t.x.str();
        out += ' ';
        out += t.y.str();
        out += '\n';
    }
    return out;
}

}  // namespace selfsim
