#include "selfsim/family_diag.hpp"

#include "selfsim/errors.hpp"

namespace selfsim {

namespace {

void require_positive_p(const DiagParams& params, const char* what) {
    if (params.p < 0) {
        throw InvalidParameter(std::string(what) + " is only defined for p > 0 (got p = " + std::to_string(params.p) +
                               ")");
    }
}

void check_piece(const DiagParams& params, Piece piece) {
    const long q = params.p < 0 ? -params.p : params.p;
    if (piece.i < 0 || piece.j < 0 || piece.i >= q || piece.j >= q) {
        throw AddressError("piece " + to_string(piece) + " outside {0..|p|-1}^2");
    }
}

Point2 reflect(const Point2& z) {
    return Point2{Rational(1) - z.x, Rational(1) - z.y};
}

std::string point_text(const Point2& z) {
    return "(" + z.x.str() + ", " + z.y.str() + ")";
}

nlohmann::json point_json(const Point2& z) {
    return nlohmann::json::array({z.x.str(), z.y.str()});
}

Segment image(const AffineMap& f, const Segment& s) {
    return Segment{f.apply(s.a), f.apply(s.b)};
}

bool on_diagonal_line(const Point2& z, const Rational& offset) {
    return z.y - z.x == offset;
}

}  // namespace

DiagParams DiagParams::make(long p, Rational eps) {
    if (p < 3 && p > -3) throw InvalidParameter("family B needs |p| > 2, got p = " + std::to_string(p));
    return DiagParams{p, std::move(eps)};
}

std::string to_string(const Piece& piece) {
    return "(" + std::to_string(piece.i) + "," + std::to_string(piece.j) + ")";
}

DigitSet build_diag_digits(const DiagParams& params) {
    const DiagParams checked = DiagParams::make(params.p, params.eps);
    const long q = checked.p < 0 ? -checked.p : checked.p;
    DigitSet ds;
    ds.p = checked.p;
    for (long i = 0; i < q; ++i) {
        for (long j = 0; j < q; ++j) {
            const Rational a = i == j ? checked.eps : Rational(0);
            ds.digits.push_back(Point2{Rational(i) + a, Rational(j) + a});
            ds.labels.emplace_back(i, j);
        }
    }
    return ds;
}

AffineMap diag_map(const DiagParams& params, Piece piece) {
    check_piece(params, piece);
    const Rational a = piece.i == piece.j ? params.eps : Rational(0);
    return AffineMap::contraction(params.p, Point2{Rational(piece.i) + a, Rational(piece.j) + a});
}

FixedPointTable fixed_point_table(const DiagParams& params) {
    const long last = (params.p < 0 ? -params.p : params.p) - 1;
    const auto t = [&](long i, long j) { return fixed_point(diag_map(params, Piece{i, j})); };
    return FixedPointTable{t(0, 0), t(1, 0), t(0, 1), t(1, last), t(0, last), t(last, 0), t(last, 1), t(last, last)};
}

std::optional<Point2> adjacency_witness(const DiagParams& params, Piece a, Piece b) {
    require_positive_p(params, "adjacency_witness");
    check_piece(params, a);
    check_piece(params, b);
    if (b < a) std::swap(a, b);
    const long last = params.p - 1;
    const FixedPointTable t = fixed_point_table(params);
    const auto f = [&](long i, long j) { return diag_map(params, Piece{i, j}); };

    std::optional<std::pair<Point2, Point2>> both;
    if (a.j == b.j && b.i == a.i + 1 && a.i != a.j && a.i + 1 != a.j) {
        // horizontal neighbours
        both.emplace(f(a.i, a.j).apply(t.tlast_1), f(b.i, b.j).apply(t.t01));
    } else if (a.i == b.i && b.j == a.j + 1 && a.j != a.i && a.j + 1 != a.i) {
        // vertical neighbours
        both.emplace(f(a.i, a.j).apply(t.t1_last), f(b.i, b.j).apply(t.t10));
    } else if (a.i + 1 == b.i && a.j == b.j + 1 && a.i == b.j) {
        // anti-diagonal: a = (k, k+1), b = (k+1, k)
        both.emplace(f(b.i, b.j).apply(t.t0_last), f(a.i, a.j).apply(t.tlast_0));
    } else if (a.i == a.j && b.i == b.j && b.i == a.i + 1) {
        both.emplace(f(a.i, a.i).apply(t.tlast_last), f(b.i, b.i).apply(t.t00));
    }
    (void)last;
    if (!both) return std::nullopt;
    if (both->first != both->second) {
        throw ConsistencyError("witness for " + to_string(a) + "/" + to_string(b) + " differs under the two maps: " +
                               point_text(both->first) + " vs " + point_text(both->second));
    }
    return both->first;
}

const char* to_string(Verdict v) {
    return v == Verdict::Connected ? "Connected" : "Disconnected";
}

const char* to_string(CaseTag c) {
    switch (c) {
        case CaseTag::I: return "I";
        case CaseTag::II: return "II";
        case CaseTag::III: return "III";
        case CaseTag::IV: return "IV";
    }
    return "?";
}

Rational connectivity_threshold(long p) {
    const long q = p < 0 ? -p : p;
    if (q < 3) throw InvalidParameter("family B needs |p| > 2");
    return Rational((q - 1) * (q - 1), q - 2);
}

std::vector<WitnessEdge> neighbour_witnesses(const DiagParams& params) {
    require_positive_p(params, "neighbour_witnesses");
    std::vector<Piece> pieces;
    for (long i = 0; i < params.p; ++i) {
        for (long j = 0; j < params.p; ++j) pieces.push_back(Piece{i, j});
    }
    std::vector<WitnessEdge> out;
    for (std::size_t x = 0; x < pieces.size(); ++x) {
        for (std::size_t y = x + 1; y < pieces.size(); ++y) {
            if (auto w = adjacency_witness(params, pieces[x], pieces[y])) out.push_back({pieces[x], pieces[y], *w});
        }
    }
    return out;
}

PieceGraph piece_graph(long p, const std::vector<WitnessEdge>& edges) {
    std::vector<std::string> labels;
    for (long i = 0; i < p; ++i) {
        for (long j = 0; j < p; ++j) labels.push_back(to_string(Piece{i, j}));
    }
    PieceGraph g(std::move(labels));
    const auto id = [p](Piece x) { return static_cast<std::size_t>(x.i * p + x.j); };
    for (const WitnessEdge& e : edges) g.add_edge(id(e.a), id(e.b), Contact{ContactKind::Point, e.point});
    return g;
}

namespace {

/// The certificate for eps >= 0.
ConnectivityCertificate base_certificate(const DiagParams& params) {
    const long p = params.p;
    const Rational& eps = params.eps;
    const FixedPointTable t = fixed_point_table(params);
    const auto f = [&](long i, long j) { return diag_map(params, Piece{i, j}); };
    const Segment diagonal{t.t00, t.tlast_last};
    const Piece upper{p - 2, p - 1};  // the upper piece whose images carry the contact segments
    const Piece origin{0, 0};

    ConnectivityCertificate cert;
    cert.p = p;
    cert.eps = eps;

    const Rational case1 = Rational((p - 1) * (p - 1), p);
    const Rational case2 = Rational(p - 1);
    const Rational case3 = connectivity_threshold(p);
    std::optional<WitnessEdge> contact;

    if (eps <= case1) {
        const Point2 w = f(p - 2, p - 1).apply(t.tlast_0);
        if (!diagonal.contains(w) || !on_diagonal_line(w, Rational(0))) {
            throw ConsistencyError("case I witness " + point_text(w) + " is not on diagonal");
        }
        long k = 0;
        while (k < p && !image(f(k, k), diagonal).contains(w)) ++k;
        if (k == p) throw ConsistencyError("case I witness is not on any f_{k,k}(diagonal)");
        cert.case_tag = CaseTag::I;
        cert.witness = w;
        cert.segment = diagonal;
        cert.line = "L5";
        contact = WitnessEdge{Piece{k, k}, upper, w};
    } else if (eps <= case2) {
        const Point2 chain_contact = f(0, 0).apply(f(1, p - 1).apply(t.t0_last));
        const Rational chain_offset = Rational(1, p) - Rational(1, p * p);
        std::vector<Segment> parts;
        for (long i = 0; i <= p - 2; ++i) parts.push_back(image(compose(f(p - 2, p - 1), f(i + 1, i)), diagonal));
        for (std::size_t k = 0; k + 1 < parts.size(); ++k) {
            if (parts[k].b != parts[k + 1].a) throw ConsistencyError("chained sub-segments do not meet end to end");
        }
        const Segment chain_segment{parts.front().a, parts.back().b};
        for (const Segment& s : parts) {
            if (!on_diagonal_line(s.a, chain_offset) || !on_diagonal_line(s.b, chain_offset)) {
                throw ConsistencyError("chained sub-segment leaves L6");
            }
        }
        if (!on_diagonal_line(chain_contact, chain_offset) || !chain_segment.contains(chain_contact)) {
            throw ConsistencyError("case II witness is not on the chained segment");
        }
        const Rational lower = Rational(p * (p - 1) * (p - 2), p * p - p - 1);
        if (eps < lower) throw ConsistencyError("case II reached below its lower threshold");
        cert.case_tag = CaseTag::II;
        cert.witness = chain_contact;
        cert.segment = chain_segment;
        cert.line = "L6";
        contact = WitnessEdge{origin, upper, chain_contact};
    } else {
        const Point2 corner_image = f(0, 0).apply(t.t0_last);
        const Segment upper_image = image(f(p - 2, p - 1), diagonal);
        const Rational near_offset = Rational(1, p);
        if (!on_diagonal_line(corner_image, near_offset) || !on_diagonal_line(upper_image.a, near_offset) || !on_diagonal_line(upper_image.b, near_offset)) {
            throw ConsistencyError("corner image or upper image segment is not on L3");
        }
        if (eps <= case3) {
            if (!upper_image.contains(corner_image)) throw ConsistencyError("case III witness is not on the upper image segment");
            cert.case_tag = CaseTag::III;
            cert.witness = corner_image;
            cert.segment = upper_image;
            cert.line = "L3";
            contact = WitnessEdge{origin, upper, corner_image};
        } else {
            // Right end of f_{i,j}(diagonal) carries the largest abscissa of f_{i,j}(T).
            Rational upper_max_x = f(0, 1).apply(diagonal.b).x;
            for (long i = 0; i < p; ++i) {
                for (long j = i + 1; j < p; ++j) upper_max_x = std::max(upper_max_x, f(i, j).apply(diagonal.b).x);
            }
            if (upper_max_x != upper_image.b.x) throw ConsistencyError("max abscissa of the upper pieces is not the right end of the upper image");
            if (!(upper_max_x < corner_image.x)) throw ConsistencyError("case IV separation is not strict");
            cert.verdict = Verdict::Disconnected;
            cert.case_tag = CaseTag::IV;
            cert.segment = upper_image;
            cert.line = "L3";
            cert.separation = std::make_pair(upper_max_x, corner_image.x);
        }
    }

    cert.chain = neighbour_witnesses(params);
    if (contact) {
        cert.chain.push_back(*contact);
        // Mirror through y = x.
        cert.chain.push_back(WitnessEdge{Piece{contact->a.j, contact->a.i}, Piece{contact->b.j, contact->b.i},
                                         contact->point.swapped()});
    }
    return cert;
}

}  // namespace

ConnectivityCertificate connectivity_certificate(const DiagParams& params) {
    const DiagParams checked = DiagParams::make(params.p, params.eps);
    require_positive_p(checked, "connectivity_certificate");
    const long p = checked.p;

    ConnectivityCertificate cert;
    if (checked.eps.sign() >= 0) {
        cert = base_certificate(checked);
    } else {
        // T_{-e} = (1,1) - T_e, and the reflection sends piece (i,j) to (p-1-i, p-1-j).
        const ConnectivityCertificate base = base_certificate(DiagParams{p, -checked.eps});
        cert = base;
        cert.eps = checked.eps;
        cert.reflected = true;
        if (base.witness) cert.witness = reflect(*base.witness);
        if (base.segment) cert.segment = Segment{reflect(base.segment->b), reflect(base.segment->a)};
        if (base.separation) {
            cert.separation = std::make_pair(Rational(1) - base.separation->second, Rational(1) - base.separation->first);
        }
        cert.chain = neighbour_witnesses(checked);
        const auto mirror_piece = [p](Piece x) { return Piece{p - 1 - x.i, p - 1 - x.j}; };
        const std::size_t n_neighbour = neighbour_witnesses(DiagParams{p, -checked.eps}).size();
        for (std::size_t k = n_neighbour; k < base.chain.size(); ++k) {
            const WitnessEdge& e = base.chain[k];
            cert.chain.push_back(WitnessEdge{mirror_piece(e.a), mirror_piece(e.b), reflect(e.point)});
        }
        if (cert.witness && !cert.segment->contains(*cert.witness)) {
            throw ConsistencyError("reflected witness left its segment");
        }
    }

    const PieceGraph g = piece_graph(p, cert.chain);
    cert.graph_components = components(g).count;
    const std::size_t expected = cert.verdict == Verdict::Connected ? 1 : 2;
    if (cert.graph_components != expected) {
        throw ConsistencyError("piece graph has " + std::to_string(cert.graph_components) + " components, expected " +
                               std::to_string(expected));
    }
    return cert;
}

bool is_connected(const DiagParams& params) {
    const DiagParams checked = DiagParams::make(params.p, params.eps);
    const bool closed_form = checked.eps.abs() <= connectivity_threshold(checked.p);
    if (checked.p > 0) {
        const ConnectivityCertificate cert = connectivity_certificate(checked);
        if ((cert.verdict == Verdict::Connected) != closed_form) {
            throw ConsistencyError("certificate verdict disagrees with the closed-form threshold");
        }
    }
    return closed_form;
}

std::optional<OscWitness> osc_failure_witness(const DiagParams& params) {
    const DiagParams checked = DiagParams::make(params.p, params.eps);
    require_positive_p(checked, "osc_failure_witness");
    const long p = checked.p;
    const Rational scaled = checked.eps * Rational(p);
    if (!scaled.is_integer()) return std::nullopt;
    const BigInt n = scaled.num();
    BigInt ell_big;
    BigInt k_big;
    mpz_fdiv_qr(ell_big.get_mpz_t(), k_big.get_mpz_t(), n.get_mpz_t(), BigInt(p).get_mpz_t());
    if (ell_big < 0 || ell_big > p - 2 || k_big < 1 || k_big > p - 1) return std::nullopt;
    const long ell = ell_big.get_si();
    const long k = k_big.get_si();

    const auto f = [&](long i, long j) { return diag_map(checked, Piece{i, j}); };
    OscWitness w{ell,
                 k,
                 {compose(f(0, 0), f(0, p - 1)), compose(f(ell, ell + 1), f(k, k - 1))},
                 {compose(f(0, 0), f(p - 1, 0)), compose(f(ell + 1, ell), f(k - 1, k))}};
    if (!map_equal(w.pair.first, w.pair.second) || !map_equal(w.mirror.first, w.mirror.second)) {
        throw ConsistencyError("open-set-condition witness maps are not equal");
    }
    return w;
}

nlohmann::json to_json(const ConnectivityCertificate& cert) {
    nlohmann::json j{{"p", cert.p},
                     {"eps", cert.eps.str()},
                     {"verdict", to_string(cert.verdict)},
                     {"case", to_string(cert.case_tag)},
                     {"line", cert.line},
                     {"reflected", cert.reflected},
                     {"chain_length", cert.chain.size()},
                     {"graph_components", cert.graph_components}};
    j["witness"] = cert.witness ? point_json(*cert.witness) : nlohmann::json(nullptr);
    if (cert.segment) j["segment"] = {point_json(cert.segment->a), point_json(cert.segment->b)};
    if (cert.separation) j["separation"] = {cert.separation->first.str(), cert.separation->second.str()};
    nlohmann::json chain = nlohmann::json::array();
    for (const WitnessEdge& e : cert.chain) {
        chain.push_back({{"a", to_string(e.a)}, {"b", to_string(e.b)}, {"point", point_json(e.point)}});
    }
    j["chain"] = std::move(chain);
    return j;
}

}  // namespace selfsim
