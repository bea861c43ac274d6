#include "selfsim/family_shift.hpp"

#include "selfsim/errors.hpp"

#include <map>

namespace selfsim {

namespace {

bool is_odd(long j) {
    return (j % 2) != 0;
}

long balanced_residue(long j, long q) {
    const long m = (q - 1) / 2;
    return (((j + m) % q) + q) % q - m;
}

std::string address_label(const Address& a) {
    if (a.empty()) return "[]";
    std::string s = "[";
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (k) s += ",";
        s += std::to_string(a[k]);
    }
    return s + "]";
}

}  // namespace

ShiftParams ShiftParams::make(long p, Rational eps) {
    const long q = p < 0 ? -p : p;
    if (q < 3 || q % 2 == 0) {
        throw InvalidParameter("family A needs |p| odd and >= 3, got p = " + std::to_string(p));
    }
    return ShiftParams{p, (q - 1) / 2, std::move(eps)};
}

StripSystem::StripSystem(const ShiftParams& params) : params_(ShiftParams::make(params.p, params.eps)) {
    const long p = params_.p;
    const long m = params_.m;
    const auto base_b = [&](long j) { return is_odd(j) ? params_.eps : Rational(0); };
    if (p > 0) {
        scale_ = p;
        m_ = m;
        for (long j = -m; j <= m; ++j) b_.push_back(base_b(j));
    } else {
        // b'_j = p b_k + b_t where j = p k + t with k, t balanced digits of base p.
        const long q = -p;
        scale_ = p * p;
        m_ = (scale_ - 1) / 2;
        for (long j = -m_; j <= m_; ++j) {
            const long t = balanced_residue(j, q);
            const long k = (j - t) / p;
            b_.push_back(Rational(p) * base_b(k) + base_b(t));
        }
    }
}

const Rational& StripSystem::b(long j) const {
    if (j < -m_ || j > m_) throw AddressError("row digit " + std::to_string(j) + " outside [-m, m]");
    return b_[static_cast<std::size_t>(j + m_)];
}

void StripSystem::check_address(const Address& a) const {
    for (long j : a) {
        if (j < -m_ || j > m_) {
            throw AddressError("address letter " + std::to_string(j) + " outside [-" + std::to_string(m_) + ", " +
                               std::to_string(m_) + "]");
        }
    }
}

Rational StripSystem::b_of(const Address& a) const {
    check_address(a);
    Rational acc;
    for (auto it = a.rbegin(); it != a.rend(); ++it) acc = (acc + b(*it)) / Rational(scale_);
    return acc;
}

Rational StripSystem::y_of(const Address& a) const {
    check_address(a);
    Rational acc;
    for (auto it = a.rbegin(); it != a.rend(); ++it) acc = (acc + Rational(*it)) / Rational(scale_);
    return acc;
}

DigitSet StripSystem::digits() const {
    DigitSet ds;
    ds.p = scale_;
    for (long i = -m_; i <= m_; ++i) {
        for (long j = -m_; j <= m_; ++j) {
            ds.digits.push_back(Point2{Rational(i) + b(j), Rational(j)});
            ds.labels.emplace_back(i, j);
        }
    }
    return ds;
}

DigitSet build_shift_digits(const ShiftParams& params) {
    const ShiftParams checked = ShiftParams::make(params.p, params.eps);
    DigitSet ds;
    ds.p = checked.p;
    for (long i = -checked.m; i <= checked.m; ++i) {
        for (long j = -checked.m; j <= checked.m; ++j) {
            ds.digits.push_back(Point2{Rational(i) + (is_odd(j) ? checked.eps : Rational(0)), Rational(j)});
            ds.labels.emplace_back(i, j);
        }
    }
    return ds;
}

StripCell strip_cell(const StripSystem& sys, const Address& address) {
    const Rational half_height = Rational(1, 2) / Rational(ipow(sys.scale(), address.size()));
    const Rational y = sys.y_of(address);
    return StripCell{address, Interval(y - half_height, y + half_height), sys.b_of(address)};
}

IntervalPair strip_interval_pair(const ShiftParams& params, long n) {
    if (n < 0) throw InvalidParameter("strip level must be >= 0");
    const StripSystem sys(params);
    const Rational half(1, 2);
    const Rational pn1(ipow(sys.scale(), static_cast<unsigned long>(n + 1)));
    Rational lower_left;
    Rational upper_left;
    if (!sys.squared()) {
        const Rational& eps = sys.params().eps;
        if (sys.m() % 2 == 0) {
            lower_left = -half;
            upper_left = eps / pn1 - half;
        } else {
            lower_left = geo_tail(eps, sys.scale(), n) - half;
            upper_left = lower_left + eps / pn1;
        }
    } else {
        // Generic shift table: lower cell continues with all-m rows, upper with all-(-m).
        const Rational tail = Rational(1) / (pn1 * Rational(sys.scale() - 1));
        lower_left = sys.b(0) / pn1 + sys.b(sys.m()) * tail - half;
        upper_left = sys.b(1) / pn1 + sys.b(-sys.m()) * tail - half;
    }
    return IntervalPair{Interval(lower_left, lower_left + 1), Interval(upper_left, upper_left + 1), half / pn1};
}

namespace {

StripContact contact_on_line(const Interval& lower, const Interval& upper, const Rational& y) {
    const Overlap ov = classify_overlap(lower, upper);
    StripContact c;
    c.kind = ov.kind;
    c.y = y;
    if (ov.kind == OverlapKind::Point) c.point = Point2{ov.point, y};
    if (ov.kind == OverlapKind::Segment) c.segment = Segment{{ov.segment.lo(), y}, {ov.segment.hi(), y}};
    return c;
}

}  // namespace

StripContact classify_strip_intersection(const ShiftParams& params, long n) {
    const IntervalPair pair = strip_interval_pair(params, n);
    return contact_on_line(pair.i1, pair.i2, pair.y_meet);
}

StripContact classify_strip_pair(const StripSystem& sys, const Address& a, const Address& b) {
    if (a.size() != b.size()) throw InvalidParameter("strip addresses must have equal length");
    if (a == b) throw InvalidParameter("strip " + address_label(a) + " compared with itself");
    const StripCell ca = strip_cell(sys, a);
    const StripCell cb = strip_cell(sys, b);
    const bool a_below = ca.y_range.hi() <= cb.y_range.lo();
    const bool b_below = cb.y_range.hi() <= ca.y_range.lo();
    if (!a_below && !b_below) {
        throw ConsistencyError("strip cells " + address_label(a) + " and " + address_label(b) + " overlap in y");
    }
    const StripCell& lower = a_below ? ca : cb;
    const StripCell& upper = a_below ? cb : ca;
    if (lower.y_range.hi() != upper.y_range.lo()) return StripContact{};

    // Top edge of the lower cell: all-m continuation; bottom edge of the upper: all-(-m).
    const Rational tail =
        Rational(1) / (Rational(ipow(sys.scale(), lower.address.size())) * Rational(sys.scale() - 1));
    const Interval unit(Rational(-1, 2), Rational(1, 2));
    const Interval lower_x = unit.shifted(lower.x_offset + sys.b(sys.m()) * tail);
    const Interval upper_x = unit.shifted(upper.x_offset + sys.b(-sys.m()) * tail);
    return contact_on_line(lower_x, upper_x, lower.y_range.hi());
}

bool nonadjacent_strips_disjoint(const ShiftParams& params, const Address& j0, long k, long l) {
    const StripSystem sys(params);
    Address a = j0;
    Address b = j0;
    a.push_back(k);
    b.push_back(l);
    const StripCell ca = strip_cell(sys, a);
    const StripCell cb = strip_cell(sys, b);
    return ca.y_range.hi() < cb.y_range.lo() || cb.y_range.hi() < ca.y_range.lo();
}

Point2 strip_translation(const ShiftParams& params, const Address& j0) {
    const StripSystem sys(params);
    return Point2{sys.b_of(j0), sys.y_of(j0)};
}

std::vector<Address> strip_addresses(const StripSystem& sys, long n) {
    if (n < 0) throw InvalidParameter("strip level must be >= 0");
    std::vector<Address> out{Address{}};
    for (long level = 0; level < n; ++level) {
        std::vector<Address> next;
        next.reserve(out.size() * static_cast<std::size_t>(sys.scale()));
        for (const Address& a : out) {
            for (long j = -sys.m(); j <= sys.m(); ++j) {
                Address b = a;
                b.push_back(j);
                next.push_back(std::move(b));
            }
        }
        out = std::move(next);
    }
    return out;
}

PieceGraph strip_graph(const StripSystem& sys, long n) {
    const std::vector<Address> cells = strip_addresses(sys, n);
    std::vector<std::string> labels;
    labels.reserve(cells.size());
    for (const Address& a : cells) labels.push_back(address_label(a));
    PieceGraph g(std::move(labels));
    // Cells are listed bottom to top and partition the y-range, so only
    // consecutive cells can share an ordinate.
    for (std::size_t k = 0; k + 1 < cells.size(); ++k) {
        const StripContact c = classify_strip_pair(sys, cells[k], cells[k + 1]);
        if (c.kind == OverlapKind::Point) g.add_edge(k, k + 1, Contact{ContactKind::Point, c.point});
        if (c.kind == OverlapKind::Segment) {
            g.add_edge(k, k + 1, Contact{ContactKind::Segment, c.segment->a});
        }
    }
    return g;
}

TopologyReport component_count(const ShiftParams& params, std::size_t graph_budget) {
    const ShiftParams checked = ShiftParams::make(params.p, params.eps);
    const long q = checked.p < 0 ? -checked.p : checked.p;
    const Rational abs_eps = checked.eps.abs();

    long n = 0;
    BigInt next = q;  // q^(n+1)
    while (Rational(next) <= abs_eps) {
        ++n;
        next *= q;
    }

    TopologyReport rep;
    rep.p = checked.p;
    rep.eps = checked.eps;
    rep.is_tile = true;
    rep.cell_level = n;
    rep.component_count = ipow(q, static_cast<unsigned long>(n));
    rep.cells_disklike = abs_eps < Rational(next);
    rep.global_disklike = n == 0;

    const StripSystem sys(checked);
    const long level = std::max<long>(1, checked.p > 0 ? n : (n + 1) / 2);
    const BigInt nodes = ipow(sys.scale(), static_cast<unsigned long>(level));
    if (nodes <= BigInt(static_cast<unsigned long>(graph_budget))) {
        const PieceGraph g = strip_graph(sys, level);
        const auto segment_only = [](const GraphEdge& e) { return e.contact.kind == ContactKind::Segment; };
        rep.graph_level = level;
        rep.graph_interior_components = static_cast<long>(components(g, segment_only).count);
        rep.graph_closed_components = static_cast<long>(components(g).count);
        if (BigInt(*rep.graph_interior_components) != rep.component_count) {
            throw ConsistencyError("strip graph at level " + std::to_string(level) + " has " +
                                   std::to_string(*rep.graph_interior_components) +
                                   " interior components, closed form says " + rep.component_count.get_str());
        }
    }
    if (rep.global_disklike != (rep.component_count == 1 && rep.cells_disklike)) {
        throw ConsistencyError("disk-likeness flags disagree with the component count");
    }
    return rep;
}

const char* to_string(MembershipKind k) {
    switch (k) {
        case MembershipKind::Inside: return "Inside";
        case MembershipKind::Boundary: return "Boundary";
        case MembershipKind::Unresolved: return "Unresolved";
    }
    return "?";
}

BalancedExpansion balanced_expansion(const Rational& r, long scale, std::size_t max_digits) {
    BalancedExpansion out;
    std::map<Rational, std::size_t> seen;
    std::vector<long> digits;
    Rational rem = r;
    const Rational P(scale);
    while (true) {
        if (auto it = seen.find(rem); it != seen.end()) {
            out.preperiod.assign(digits.begin(), digits.begin() + static_cast<long>(it->second));
            out.period.assign(digits.begin() + static_cast<long>(it->second), digits.end());
            return out;
        }
        if (digits.size() >= max_digits) {
            out.exhausted = true;
            return out;
        }
        seen.emplace(rem, digits.size());
        const Rational z = rem * P;
        const BigInt j = round_half_up(z);
        rem = z - Rational(j);
        if (rem == Rational(-1, 2)) {
            out.ambiguous = true;
            return out;
        }
        digits.push_back(j.get_si());
    }
}

Membership tiling_membership(const ShiftParams& params, const Point2& x, std::size_t depth_budget,
                             const RowShift& row_shift) {
    const StripSystem sys(params);
    const Rational half(1, 2);

    const BigInt s = round_half_up(x.y);
    const Rational r = x.y - Rational(s);
    if (r == -half) return Membership{MembershipKind::Boundary, std::nullopt, "ordinate on a row boundary"};

    const BalancedExpansion e = balanced_expansion(r, sys.scale(), depth_budget);
    if (e.ambiguous) return Membership{MembershipKind::Boundary, std::nullopt, "ordinate has two expansions"};
    if (e.exhausted) {
        return Membership{MembershipKind::Unresolved, std::nullopt,
                          "expansion period exceeds " + std::to_string(depth_budget) + " digits"};
    }

    // b(j) = sum over the pre-period + P^-a * (period sum) / (1 - P^-c)
    const Rational P(sys.scale());
    Rational b;
    Rational weight(1);
    for (long j : e.preperiod) {
        weight /= P;
        b += sys.b(j) * weight;
    }
    Rational period_sum;
    Rational w(1);
    for (long j : e.period) {
        w /= P;
        period_sum += sys.b(j) * w;
    }
    b += weight * period_sum / (Rational(1) - w);

    const Rational shift = row_shift ? row_shift(s) : Rational(0);
    const Rational residual_base = x.x - b - shift;
    const BigInt n = round_half_up(residual_base);
    if (residual_base - Rational(n) == -half) {
        return Membership{MembershipKind::Boundary, std::nullopt, "abscissa on a tile side"};
    }
    return Membership{MembershipKind::Inside, Point2{Rational(n) + shift, Rational(s)}, {}};
}

std::vector<Point2> tiling_lattice_patch(long n_lo, long n_hi, long s_lo, long s_hi, const RowShift& row_shift) {
    if (n_hi < n_lo || s_hi < s_lo) throw InvalidParameter("empty lattice window");
    std::vector<Point2> out;
    for (long s = s_lo; s <= s_hi; ++s) {
        const Rational shift = row_shift ? row_shift(BigInt(s)) : Rational(0);
        for (long n = n_lo; n <= n_hi; ++n) out.push_back(Point2{Rational(n) + shift, Rational(s)});
    }
    return out;
}

}  // namespace selfsim
