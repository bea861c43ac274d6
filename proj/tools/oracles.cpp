#include "oracles.hpp"

#include "selfsim/errors.hpp"
#include "selfsim/tiling_qp.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <set>
#include <unordered_map>

namespace selfsim::oracle {

namespace {

bool in_box(const Box& b, const Point2& z) {
    return b.x.contains(z.x) && b.y.contains(z.y);
}

Rational random_rational(std::mt19937_64& rng, long lo, long hi, long max_den) {
    std::uniform_int_distribution<long> den_dist(1, max_den);
    const long den = den_dist(rng);
    std::uniform_int_distribution<long> num_dist(lo * den, hi * den);
    return Rational(num_dist(rng), den);
}

long int_pow(long b, long e) {
    long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

std::string text(const Point2& z) {
    return "(" + z.x.str() + ", " + z.y.str() + ")";
}

}  // namespace

bool attractor_contains(const DigitSet& ds, const Point2& z, std::size_t state_budget) {
    const Box hull = attractor_bounds(ds);
    if (!in_box(hull, z)) return false;
    const Rational p(ds.p);

    std::unordered_map<Point2, std::size_t, Point2Hash> id;
    std::vector<Point2> states;
    std::vector<std::vector<std::size_t>> succ;
    std::deque<std::size_t> todo;
    id.emplace(z, 0);
    states.push_back(z);
    succ.emplace_back();
    todo.push_back(0);
    while (!todo.empty()) {
        const std::size_t s = todo.front();
        todo.pop_front();
        for (const Point2& d : ds.digits) {
            Point2 next = states[s] * p - d;
            if (!in_box(hull, next)) continue;
            auto [it, fresh] = id.emplace(next, states.size());
            if (fresh) {
                if (states.size() >= state_budget) throw ResourceError("membership state graph exceeds its budget");
                states.push_back(std::move(next));
                succ.emplace_back();
                todo.push_back(it->second);
            }
            succ[s].push_back(it->second);
        }
    }

    // Remove states without surviving successors until nothing changes.
    const std::size_t n = states.size();
    std::vector<std::vector<std::size_t>> pred(n);
    std::vector<std::size_t> out_degree(n);
    for (std::size_t s = 0; s < n; ++s) {
        std::sort(succ[s].begin(), succ[s].end());
        succ[s].erase(std::unique(succ[s].begin(), succ[s].end()), succ[s].end());
        out_degree[s] = succ[s].size();
        for (std::size_t t : succ[s]) pred[t].push_back(s);
    }
    std::vector<bool> dead(n, false);
    std::vector<std::size_t> queue;
    for (std::size_t s = 0; s < n; ++s) {
        if (out_degree[s] == 0) {
            dead[s] = true;
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        const std::size_t t = queue.back();
        queue.pop_back();
        for (std::size_t s : pred[t]) {
            if (!dead[s] && --out_degree[s] == 0) {
                dead[s] = true;
                queue.push_back(s);
            }
        }
    }
    return !dead[0];
}

TruncatedEdges strip_edges_by_expansion(const ShiftParams& params, long n, long digits) {
    if (params.p < 3) throw InvalidParameter("expansion oracle needs p > 0");
    const long p = params.p;
    const long m = (p - 1) / 2;
    const auto shift = [&](long j) { return (j % 2 != 0) ? params.eps : Rational(0); };
    // Lower cell rows: 0 ... 0 (n + 1 digits) then m forever; upper: 0 ... 0 1 then -m forever.
    // The left end uses column digit -m at every position.
    Rational lower;
    Rational upper;
    Rational weight(1);
    for (long t = 1; t <= digits; ++t) {
        weight /= Rational(p);
        const long row_lower = t <= n + 1 ? 0 : m;
        const long row_upper = t <= n ? 0 : (t == n + 1 ? 1 : -m);
        lower += (Rational(-m) + shift(row_lower)) * weight;
        upper += (Rational(-m) + shift(row_upper)) * weight;
    }
    // Remaining terms are at most (m + |eps|) p^-t each.
    const Rational bound = (Rational(m) + params.eps.abs()) * weight / Rational(p - 1);
    return TruncatedEdges{lower, upper, bound};
}

long strip_components(const ShiftParams& params, long n) {
    if (params.p < 3) throw InvalidParameter("component oracle needs p > 0");
    const long p = params.p;
    const long m = (p - 1) / 2;
    const auto shift = [&](long j) { return (j % 2 != 0) ? params.eps : Rational(0); };
    if (n == 0) return 1;

    struct Cell {
        Rational y;
        Rational b;
    };
    std::vector<Cell> cells;
    const long count = int_pow(p, n);
    for (long code = 0; code < count; ++code) {
        long rest = code;
        Rational y;
        Rational b;
        Rational w(1);
        for (long t = 0; t < n; ++t) {
            const long j = rest % p - m;
            rest /= p;
            w /= Rational(p);
            y += Rational(j) * w;
            b += shift(j) * w;
        }
        cells.push_back({y, b});
    }
    std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& c) { return a.y < c.y; });

    // Tail of all-m (top edge) and all-(-m) (bottom edge) rows after the address.
    const Rational tail = Rational(1) / (Rational(count) * Rational(p - 1));
    long components = 1;
    for (std::size_t k = 0; k + 1 < cells.size(); ++k) {
        const Rational top = cells[k].b + shift(m) * tail;
        const Rational bottom = cells[k + 1].b + shift(-m) * tail;
        const Rational gap = (top - bottom).abs();  // unit intervals overlap in 1 - gap
        if (!(gap < Rational(1))) ++components;
    }
    return components;
}

std::vector<Point2> closed_form_patch(const ShiftParams& params, long k) {
    const long p = params.p;
    const long q = p < 0 ? -p : p;
    const long m = (q - 1) / 2;
    const long count = int_pow(q, k);
    std::vector<Point2> out;
    for (long a = 0; a < count; ++a) {
        long y = 0;
        long parity = 0;
        long power = 1;
        long rest = a;
        for (long t = 0; t < k; ++t) {
            const long j = rest % q - m;
            rest /= q;
            y += j * power;
            parity += (j % 2 != 0 ? 1 : 0) * power;
            power *= p;
        }
        for (long c = 0; c < count; ++c) {
            long x = 0;
            long pw = 1;
            long r2 = c;
            for (long t = 0; t < k; ++t) {
                x += (r2 % q - m) * pw;
                r2 /= q;
                pw *= p;
            }
            out.push_back(Point2{Rational(x) + Rational(parity) * params.eps, Rational(y)});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t census_pairs(const ShiftParams& params, const Rational& c, long k) {
    const std::vector<Point2> pts = closed_form_patch(params, k);
    std::set<Point2> classes;
    for (const Point2& a : pts) {
        for (const Point2& b : pts) {
            const Point2 d = b - a;
            if (a < b && d.x.abs() <= c && d.y.abs() <= c) classes.insert(d);
        }
    }
    return classes.size();
}

SuiteResult run_strips(std::uint64_t seed, std::size_t count) {
    SuiteResult r{"strips", 0, {}};
    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k < count; ++k) {
        const long p = (k % 2 == 0) ? 3 : 5;
        const long n = 1 + static_cast<long>(k % 3);
        const Rational eps = random_rational(rng, 0, 2 * int_pow(p, n + 1), 12);
        const ShiftParams params = ShiftParams::make(p, eps);
        const IntervalPair pair = strip_interval_pair(params, n);
        const TruncatedEdges edges = strip_edges_by_expansion(params, n, 40);
        ++r.checks;
        if ((pair.i1.lo() - edges.lower_left).abs() > edges.error_bound ||
            (pair.i2.lo() - edges.upper_left).abs() > edges.error_bound) {
            r.failures.push_back("p=" + std::to_string(p) + " n=" + std::to_string(n) + " eps=" + eps.str() +
                                 ": interval endpoints disagree with the expansion sums");
        }
    }
    return r;
}

SuiteResult run_components(std::size_t count) {
    SuiteResult r{"components", 0, {}};
    for (std::size_t k = 0; k < count; ++k) {
        const Rational eps(static_cast<long>(80 * k), static_cast<long>(count - 1));
        const ShiftParams params = ShiftParams::make(3, eps);
        const TopologyReport rep = component_count(params);
        const long oracle = strip_components(params, std::max<long>(1, rep.cell_level));
        ++r.checks;
        if (BigInt(oracle) != rep.component_count) {
            r.failures.push_back("eps=" + eps.str() + ": closed form " + rep.component_count.get_str() +
                                 ", strip graph " + std::to_string(oracle));
        }
    }
    return r;
}

SuiteResult run_diag(std::size_t count) {
    SuiteResult r{"diag", 0, {}};
    const long ps[] = {3, 4, 5, 7};
    const std::size_t per = std::max<std::size_t>(count / 4, 1);
    for (long p : ps) {
        const Rational threshold(BigInt((p - 1) * (p - 1)), BigInt(p - 2));
        for (std::size_t k = 0; k < per; ++k) {
            Rational eps(static_cast<long>(k), 10);
            if (k % 3 == 1) eps = -eps;
            const DiagParams params = DiagParams::make(p, eps);
            const ConnectivityCertificate cert = connectivity_certificate(params);
            const bool expected = eps.abs() <= threshold;
            ++r.checks;
            if ((cert.verdict == Verdict::Connected) != expected) {
                r.failures.push_back("p=" + std::to_string(p) + " eps=" + eps.str() + ": verdict disagrees");
            }
            if (p == 7 || k % 5 != 0) continue;
            // Every recorded contact must lie in both pieces.
            const DigitSet ds = build_diag_digits(params);
            for (const WitnessEdge& e : cert.chain) {
                for (const Piece& piece : {e.a, e.b}) {
                    const Point2 d = ds.digits[ds.index_of(piece.i, piece.j)];
                    const Point2 pre = e.point * Rational(p) - d;
                    ++r.checks;
                    if (!attractor_contains(ds, pre)) {
                        r.failures.push_back("p=" + std::to_string(p) + " eps=" + eps.str() + ": witness " +
                                             text(e.point) + " is not in piece " + to_string(piece));
                    }
                }
            }
        }
    }
    return r;
}

SuiteResult run_census() {
    SuiteResult r{"census", 0, {}};
    for (const char* e : {"0", "1", "1/2", "2/7", "2/5"}) {
        const ShiftParams params = ShiftParams::make(3, Rational::parse(e));
        for (long c : {1L, 2L}) {
            const CensusReport lib = local_finiteness_census(params, Rational(c), 2);
            const std::size_t brute = census_pairs(params, Rational(c), 2);
            ++r.checks;
            if (lib.classes != brute) {
                r.failures.push_back(std::string("eps=") + e + " c=" + std::to_string(c) + ": census " +
                                     std::to_string(lib.classes) + " vs brute force " + std::to_string(brute));
            }
            ++r.checks;
            if (BigInt(static_cast<unsigned long>(lib.classes)) > *lib.bound) {
                r.failures.push_back(std::string("eps=") + e + " c=" + std::to_string(c) + ": above the bound");
            }
        }
        const std::vector<Point2> closed = closed_form_patch(params, 3);
        ++r.checks;
        if (closed != dset_k(params, 3).points) {
            r.failures.push_back(std::string("eps=") + e + ": D_3 differs from the closed-form listing");
        }
    }
    return r;
}

SuiteResult run_suite(const std::string& name) {
    if (name == "strips") return run_strips();
    if (name == "components") return run_components();
    if (name == "diag") return run_diag();
    if (name == "census") return run_census();
    throw InvalidParameter("unknown oracle suite '" + name + "' (strips, components, diag, census)");
}

}  // namespace selfsim::oracle
