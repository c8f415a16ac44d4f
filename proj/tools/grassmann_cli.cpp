// Command-line front end: invariant reports, equivalence checks, geodesic and
// holonomy runs, tensor evaluation, and the discrete gauge graph, with
// deterministic JSON/CSV emission (floats at 17 significant digits).

#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "grassmann/grassmann.hpp"

namespace {

using namespace grassmann;
using nlohmann::ordered_json;

struct CommonOpts {
    std::string format = "json";
    bool orthonormalize = false;
    double tol = -1.0;  // negative = default eq_tol

    ParseOptions parse_options() const {
        ParseOptions opts;
        opts.orthonormalize = orthonormalize;
        if (tol > 0.0) opts.eq_tol_override = tol;
        return opts;
    }
};

// long-format CSV: quantity,i,j,k,value
struct CsvWriter {
    std::ostringstream out;
    CsvWriter() { out << "quantity,i,j,k,value\n"; }
    void row(const std::string& q, const std::string& i, const std::string& j,
             const std::string& k, double v) {
        out << q << ',' << i << ',' << j << ',' << k << ',' << format_double_17(v) << '\n';
    }
    void scalar(const std::string& q, double v) { row(q, "", "", "", v); }
    void vec(const std::string& q, const RVector& v) {
        for (Eigen::Index i = 0; i < v.size(); ++i) row(q, std::to_string(i), "", "", v(i));
    }
    void mat(const std::string& q, const RMatrix& m) {
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j)
                row(q, std::to_string(i), std::to_string(j), "", m(i, j));
    }
};

void emit(const ordered_json& doc, const CommonOpts& common,
          const std::function<std::string()>& csv) {
    if (common.format == "csv") {
        std::cout << csv();
    } else {
        std::cout << dump_json_17(doc);
    }
}

Configuration load_config(const std::string& path, const CommonOpts& common, int expect_l = -1) {
    Configuration config = parse_config_file(path, common.parse_options());
    if (expect_l > 0 && config.size() != expect_l)
        throw BadArguments(path + ": expected " + std::to_string(expect_l) +
                           " subspaces, found " + std::to_string(config.size()));
    return config;
}

ordered_json phase_tensor3_json(const PhaseTensor& t, int m) {
    ordered_json arr = ordered_json::array();
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                ordered_json e;
                e["i"] = i;
                e["j"] = j;
                e["k"] = k;
                e["defined"] = t.is_defined({i, j, k});
                e["value"] = t.raw({i, j, k});
                arr.push_back(std::move(e));
            }
    return arr;
}

ordered_json phase_tensor4_json(const PhaseTensor& t, int m) {
    ordered_json arr = ordered_json::array();
    for (int i = 0; i < m; ++i)
        for (int i2 = i + 1; i2 < m; ++i2)
            for (int k = 0; k < m; ++k)
                for (int k2 = k + 1; k2 < m; ++k2) {
                    ordered_json e;
                    e["i"] = i;
                    e["i2"] = i2;
                    e["k"] = k;
                    e["k2"] = k2;
                    e["defined"] = t.is_defined({i, i2, k, k2});
                    e["value"] = t.raw({i, i2, k, k2});
                    arr.push_back(std::move(e));
                }
    return arr;
}

int cmd_angles(const std::string& input, const CommonOpts& common) {
    Configuration c = load_config(input, common, 2);
    PairData pd = principal_decomposition(c.subspaces[0], c.subspaces[1], c.tol);
    RVector lengths = finsler_lengths_from_angles(pd.theta);
    Complex plucker = plucker_overlap(c.subspaces[0], c.subspaces[1], c.tol);

    ordered_json doc;
    doc["n"] = c.n();
    doc["m"] = c.m();
    doc["theta"] = vector_to_json(pd.theta);
    doc["cosines"] = vector_to_json(pd.cosines);
    ordered_json jl;
    for (int l = 1; l <= c.m(); ++l) jl["L" + std::to_string(l)] = lengths(l - 1);
    doc["lengths"] = std::move(jl);
    doc["plucker"] = {{"abs", std::abs(plucker)}, {"arg", std::arg(plucker)}};
    doc["degenerate"] = pd.degenerate();

    emit(doc, common, [&] {
        CsvWriter csv;
        csv.vec("theta", pd.theta);
        csv.vec("cosine", pd.cosines);
        csv.vec("length", lengths);
        csv.scalar("plucker_abs", std::abs(plucker));
        csv.scalar("plucker_arg", std::arg(plucker));
        return csv.out.str();
    });
    return 0;
}

int cmd_triple(const std::string& input, const CommonOpts& common) {
    Configuration c = load_config(input, common, 3);
    TripleData td = triple_invariants(c.subspaces[0], c.subspaces[1], c.subspaces[2], c.tol);

    ordered_json doc;
    doc["n"] = c.n();
    doc["m"] = c.m();
    doc["theta_vw"] = vector_to_json(td.theta_vw);
    doc["theta_wu"] = vector_to_json(td.theta_wu);
    doc["theta_vu"] = vector_to_json(td.theta_vu);
    doc["unitary_v"] = matrix_to_json(td.unitaries.v_mat);
    doc["unitary_w"] = matrix_to_json(td.unitaries.w_mat);
    doc["unitary_u"] = matrix_to_json(td.unitaries.u_mat);
    doc["two_state_overlaps"] = {{"v", real_matrix_to_json(td.so_v)},
                                 {"w", real_matrix_to_json(td.so_w)},
                                 {"u", real_matrix_to_json(td.so_u)}};
    doc["four_state_phases"] = {{"v", phase_tensor4_json(td.fsp_v, td.m())},
                                {"w", phase_tensor4_json(td.fsp_w, td.m())},
                                {"u", phase_tensor4_json(td.fsp_u, td.m())}};
    doc["three_state_phases"] = phase_tensor3_json(td.tsp, td.m());

    emit(doc, common, [&] {
        CsvWriter csv;
        csv.vec("theta_vw", td.theta_vw);
        csv.vec("theta_wu", td.theta_wu);
        csv.vec("theta_vu", td.theta_vu);
        csv.mat("so_v", td.so_v);
        csv.mat("so_w", td.so_w);
        csv.mat("so_u", td.so_u);
        for (int i = 0; i < td.m(); ++i)
            for (int j = 0; j < td.m(); ++j)
                for (int k = 0; k < td.m(); ++k)
                    if (td.tsp.is_defined({i, j, k}))
                        csv.row("tsp", std::to_string(i), std::to_string(j), std::to_string(k),
                                td.tsp.raw({i, j, k}));
        return csv.out.str();
    });
    return 0;
}

int cmd_equiv(const std::string& path_a, const std::string& path_b, bool emit_witness,
              const CommonOpts& common) {
    Configuration a = load_config(path_a, common);
    Configuration b = load_config(path_b, common);
    EquivalenceResult r = configs_equivalent(a, b);

    ordered_json doc;
    switch (r.verdict) {
        case EquivalenceResult::Verdict::Equivalent:
            doc["equivalent"] = true;
            break;
        case EquivalenceResult::Verdict::NotEquivalent:
            doc["equivalent"] = false;
            break;
        case EquivalenceResult::Verdict::Indeterminate:
            doc["equivalent"] = "indeterminate";
            break;
    }
    if (std::isfinite(r.witness_error)) doc["witness_error"] = r.witness_error;
    if (!r.detail.empty()) doc["detail"] = r.detail;
    if (emit_witness && r.witness) doc["witness"] = matrix_to_json(*r.witness);

    emit(doc, common, [&] {
        CsvWriter csv;
        csv.scalar("equivalent",
                   r.verdict == EquivalenceResult::Verdict::Equivalent ? 1.0 : 0.0);
        if (std::isfinite(r.witness_error)) csv.scalar("witness_error", r.witness_error);
        return csv.out.str();
    });
    return 0;
}

int cmd_geodesic(const std::string& input, int steps, const CommonOpts& common) {
    Configuration c = load_config(input, common, 2);
    RVector closed =
        geodesic_lengths(c.subspaces[0], c.subspaces[1], LengthMode::ClosedForm, steps, c.tol);
    RVector numeric =
        geodesic_lengths(c.subspaces[0], c.subspaces[1], LengthMode::Numeric, steps, c.tol);
    GeodesicCurve curve = geodesic(c.subspaces[0], c.subspaces[1], c.tol);

    ordered_json doc;
    doc["n"] = c.n();
    doc["m"] = c.m();
    doc["steps"] = steps;
    doc["theta"] = vector_to_json(curve.theta);
    doc["lengths_closed"] = vector_to_json(closed);
    doc["lengths_numeric"] = vector_to_json(numeric);
    doc["midpoint_frame"] = matrix_to_json(curve.frame_at(0.5));

    emit(doc, common, [&] {
        CsvWriter csv;
        csv.vec("theta", curve.theta);
        csv.vec("length_closed", closed);
        csv.vec("length_numeric", numeric);
        return csv.out.str();
    });
    return 0;
}

ParamFamily builtin_family(const std::string& name, int n, int m, int d, std::uint64_t seed) {
    if (name == "circle") {
        ParamFamily fam;
        fam.dim_param = 1;
        fam.frame_at = [](const RVector& x) {
            CMatrix f(2, 1);
            f(0, 0) = std::cos(x(0) / 2);
            f(1, 0) = std::sin(x(0) / 2);
            return f;
        };
        return fam;
    }
    if (name == "bloch") {
        ParamFamily fam;
        fam.dim_param = 2;
        fam.frame_at = [](const RVector& x) {
            CMatrix f(2, 1);
            f(0, 0) = std::cos(x(0) / 2);
            f(1, 0) = std::sin(x(0) / 2) * std::polar(1.0, x(1));
            return f;
        };
        return fam;
    }
    if (name == "random") {
        Prng rng(seed);
        auto base = std::make_shared<CMatrix>(rng.gaussian(n, m));
        auto dirs = std::make_shared<std::vector<CMatrix>>();
        for (int a = 0; a < d; ++a) dirs->push_back(0.3 * rng.gaussian(n, m));
        ParamFamily fam;
        fam.dim_param = d;
        fam.frame_at = [base, dirs](const RVector& x) {
            CMatrix raw = *base;
            for (Eigen::Index a = 0; a < x.size(); ++a)
                raw += x(a) * (*dirs)[static_cast<std::size_t>(a)];
            return orthonormalize(raw).frame;
        };
        return fam;
    }
    throw BadArguments("unknown family '" + name + "' (use circle, bloch, or random)");
}

int cmd_tensors(const std::string& family, int n, int m, const std::string& at,
                std::uint64_t seed, const CommonOpts& common) {
    std::vector<double> coords;
    std::stringstream ss(at);
    std::string tok;
    while (std::getline(ss, tok, ',')) coords.push_back(std::stod(tok));
    if (coords.empty()) throw BadArguments("--at needs a comma-separated point");
    RVector x(static_cast<Eigen::Index>(coords.size()));
    for (std::size_t i = 0; i < coords.size(); ++i) x(static_cast<Eigen::Index>(i)) = coords[i];

    ParamFamily fam = builtin_family(family, n, m, static_cast<int>(coords.size()), seed);
    if (fam.dim_param != x.size())
        throw BadArguments("family '" + family + "' expects a " +
                           std::to_string(fam.dim_param) + "-dimensional point");
    TensorSample s = evaluate_tensors(fam, x);
    AbelianTensors ab = abelian_reduction(s);

    ordered_json doc;
    doc["family"] = family;
    doc["x"] = vector_to_json(x);
    doc["n"] = s.n;
    doc["m"] = s.m;
    doc["fd_tol"] = s.fd_tol;
    ordered_json ja = ordered_json::array();
    for (int a = 0; a < s.d; ++a) ja.push_back(matrix_to_json(s.A[a]));
    doc["A"] = std::move(ja);
    auto tensor2 = [&](const std::vector<std::vector<CMatrix>>& t) {
        ordered_json rows = ordered_json::array();
        for (int a = 0; a < s.d; ++a) {
            ordered_json row = ordered_json::array();
            for (int b = 0; b < s.d; ++b) row.push_back(matrix_to_json(t[a][b]));
            rows.push_back(std::move(row));
        }
        return rows;
    };
    doc["Q"] = tensor2(s.Q);
    doc["G"] = tensor2(s.G);
    doc["F"] = tensor2(s.F);
    doc["fs_metric"] = real_matrix_to_json(ab.fs_metric);
    doc["berry_like"] = real_matrix_to_json(ab.berry_like);

    emit(doc, common, [&] {
        CsvWriter csv;
        csv.mat("fs_metric", ab.fs_metric);
        csv.mat("berry_like", ab.berry_like);
        return csv.out.str();
    });
    return 0;
}

int cmd_holonomy(const std::string& input, int i, int j, int k, int steps, std::uint64_t seed,
                 const CommonOpts& common) {
    Configuration c = load_config(input, common, 3);
    double phase = three_state_phase_via_holonomy(c.subspaces[0], c.subspaces[1],
                                                  c.subspaces[2], i, j, k, steps, c.tol, seed);
    TripleData td = triple_invariants(c.subspaces[0], c.subspaces[1], c.subspaces[2], c.tol);
    double invariant = td.tsp.at({i, j, k});

    ordered_json doc;
    doc["i"] = i;
    doc["j"] = j;
    doc["k"] = k;
    doc["steps"] = steps;
    doc["phase"] = phase;
    doc["invariant_phase"] = invariant;
    doc["difference"] = angle_distance(phase, invariant);

    emit(doc, common, [&] {
        CsvWriter csv;
        csv.row("phase", std::to_string(i), std::to_string(j), std::to_string(k), phase);
        csv.row("invariant_phase", std::to_string(i), std::to_string(j), std::to_string(k),
                invariant);
        return csv.out.str();
    });
    return 0;
}

int cmd_count(int m, int l, const CommonOpts& common) {
    long long count = invariant_count(m, l);
    ordered_json doc;
    doc["m"] = m;
    doc["l"] = l;
    doc["invariants"] = count;
    emit(doc, common, [&] {
        CsvWriter csv;
        csv.scalar("invariants", static_cast<double>(count));
        return csv.out.str();
    });
    return 0;
}

int cmd_graph(const std::string& input, const CommonOpts& common) {
    Configuration c = load_config(input, common, 3);
    TripartiteConnection conn =
        from_triple(c.subspaces[0], c.subspaces[1], c.subspaces[2], c.tol);
    std::vector<Loop> basis = loop_basis(conn.m);

    ordered_json doc;
    doc["m"] = conn.m;
    doc["phi1"] = real_matrix_to_json(conn.phi1);
    doc["phi2"] = real_matrix_to_json(conn.phi2);
    doc["phi3"] = real_matrix_to_json(conn.phi3);
    doc["loop_count"] = static_cast<int>(basis.size());
    ordered_json jloops = ordered_json::array();
    for (const Loop& loop : basis) {
        ordered_json e;
        ordered_json verts = ordered_json::array();
        for (auto [p, x] : loop.vertices) verts.push_back(ordered_json::array({p, x}));
        e["vertices"] = std::move(verts);
        e["circulation"] = wilson_loop(conn, loop);
        jloops.push_back(std::move(e));
    }
    doc["basis_loops"] = std::move(jloops);

    emit(doc, common, [&] {
        CsvWriter csv;
        csv.mat("phi1", conn.phi1);
        csv.mat("phi2", conn.phi2);
        csv.mat("phi3", conn.phi3);
        for (std::size_t b = 0; b < basis.size(); ++b)
            csv.row("circulation", std::to_string(b), "", "", wilson_loop(conn, basis[b]));
        return csv.out.str();
    });
    return 0;
}

int cmd_sample(int n, int m, int l, std::uint64_t seed) {
    // sample always emits the configuration document schema, re-parseable
    // as input for every other subcommand
    Configuration c = sample_configuration(n, m, l, seed);
    std::cout << dump_json_17(config_to_json(c));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"grassmann: unitary invariants of subspace configurations in C^n"};
    app.require_subcommand(1);

    CommonOpts common;
    std::string input, path_a, path_b, family = "bloch", at = "1.0,0.5";
    int m = 1, l = 2, steps = 1000, n = 4;
    int idx_i = 0, idx_j = 0, idx_k = 0;
    std::uint64_t seed = 0;
    bool emit_witness = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", common.format, "output format")
            ->check(CLI::IsMember({"json", "csv"}));
        sub->add_flag("--orthonormalize", common.orthonormalize,
                      "orthonormalize non-orthonormal input frames");
        sub->add_option("--tol", common.tol, "override eq_tol");
    };

    CLI::App* angles = app.add_subcommand("angles", "principal angles and lengths of a pair");
    angles->add_option("--input,-i", input, "pair configuration JSON")->required();
    add_common(angles);

    CLI::App* triple = app.add_subcommand("triple", "complete invariants of a triple");
    triple->add_option("--input,-i", input, "triple configuration JSON")->required();
    add_common(triple);

    CLI::App* equiv = app.add_subcommand("equiv", "decide unitary equivalence");
    equiv->add_option("--a", path_a, "first configuration")->required();
    equiv->add_option("--b", path_b, "second configuration")->required();
    equiv->add_flag("--emit-witness", emit_witness, "include the witness unitary");
    add_common(equiv);

    CLI::App* geodesic = app.add_subcommand("geodesic", "geodesic lengths of a pair");
    geodesic->add_option("--input,-i", input, "pair configuration JSON")->required();
    geodesic->add_option("--steps", steps, "numeric integration steps");
    add_common(geodesic);

    CLI::App* tensors = app.add_subcommand("tensors", "A, Q, G, F of a built-in family");
    tensors->add_option("--family", family, "circle | bloch | random");
    tensors->add_option("--at", at, "comma-separated parameter point");
    tensors->add_option("--n", n, "ambient dimension (random family)");
    tensors->add_option("--m", m, "subspace dimension (random family)");
    tensors->add_option("--seed", seed, "random family seed");
    add_common(tensors);

    CLI::App* holonomy = app.add_subcommand("holonomy", "3SP via geodesic transport");
    holonomy->add_option("--input,-i", input, "triple configuration JSON")->required();
    std::string indices = "0,0,0";
    holonomy->add_option("--indices", indices, "principal indices i,j,k");
    holonomy->add_option("--steps", steps, "transport steps");
    holonomy->add_option("--seed", seed, "pseudo-phase seed");
    add_common(holonomy);

    CLI::App* count = app.add_subcommand("count", "independent invariant count");
    count->add_option("--m", m, "subspace dimension")->required();
    count->add_option("--l", l, "number of subspaces")->required();
    add_common(count);

    CLI::App* graph = app.add_subcommand("graph", "tripartite U(1) connection of a triple");
    graph->add_option("--input,-i", input, "triple configuration JSON")->required();
    add_common(graph);

    CLI::App* sample = app.add_subcommand("sample", "emit a random configuration document");
    sample->add_option("--n", n, "ambient dimension")->required();
    sample->add_option("--m", m, "subspace dimension")->required();
    sample->add_option("--l", l, "number of subspaces");
    sample->add_option("--seed", seed, "sampling seed");
    add_common(sample);

    CLI11_PARSE(app, argc, argv);

    try {
        if (angles->parsed()) return cmd_angles(input, common);
        if (triple->parsed()) return cmd_triple(input, common);
        if (equiv->parsed()) return cmd_equiv(path_a, path_b, emit_witness, common);
        if (geodesic->parsed()) return cmd_geodesic(input, steps, common);
        if (tensors->parsed()) return cmd_tensors(family, n, m, at, seed, common);
        if (holonomy->parsed()) {
            if (std::sscanf(indices.c_str(), "%d,%d,%d", &idx_i, &idx_j, &idx_k) != 3)
                throw BadArguments("--indices needs the form i,j,k");
            return cmd_holonomy(input, idx_i, idx_j, idx_k, steps, seed, common);
        }
        if (count->parsed()) return cmd_count(m, l, common);
        if (graph->parsed()) return cmd_graph(input, common);
        if (sample->parsed()) return cmd_sample(n, m, l, seed);
    } catch (const grassmann::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const grassmann::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
