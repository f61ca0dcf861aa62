/* Batch front end.  Eight subcommands over the JSON artifact files:

     validate          load any files and run the matching validators
     cohomology        dimension table of H(G, E) from the direct complex
     morita            full invariance pipeline along a groupoid hypercover
     descent           transfer + homotopy certificates along a simplicial
                       hypercover of nerves
     cosk-tower        factor a simplicial map through its relative
                       coskeleton tower, verifying every stage
     sdp-check         simplicial identities of the semi-direct product
     filtration-check  stagewise cohomology of the support filtration with
                       smoothing certificates
     lambda-check      the transport onto projectable rows is a bijection
                       conjugating the differentials

   Exit codes: 0 all checks pass; 1 a mathematical claim verified false on
   valid inputs; 2 malformed or invalid input; 3 internal consistency
   failure (two evaluation paths disagree).  Reports are deterministic:
   identical inputs yield byte-identical output. */

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "groco/descent.hpp"
#include "groco/io.hpp"
#include "groco/morita.hpp"

namespace {

using namespace groco;

struct Options {
    int max_degree = -1;  // -1: command-specific default
    bool normalized = false;
    bool dump_matrices = false;
    std::string format = "human";
};

void add_common_flags(CLI::App* cmd, Options& opt) {
    cmd->add_option("--max-degree", opt.max_degree,
                    "degree / level cap (default 4; simplicial commands "
                    "default to the stored truncation)");
    cmd->add_flag("--normalized", opt.normalized,
                  "use the normalized complex (cohomology only)");
    cmd->add_flag("--dump-matrices", opt.dump_matrices,
                  "attach matrix payloads to the certificates");
    cmd->add_option("--format", opt.format, "report rendering")
        ->check(CLI::IsMember({"human", "machine"}));
}

int degree_or(const Options& opt, int fallback) {
    return opt.max_degree >= 0 ? opt.max_degree : fallback;
}

std::string yesno(bool b) { return b ? "yes" : "no"; }

std::vector<int> map_to_row(const std::map<int, int>& dims) {
    std::vector<int> out;
    for (const auto& [n, d] : dims) out.push_back(d);
    return out;
}

int finish(RunReport& rep, FileStore& store, const Options& opt) {
    rep.inputs = store.digests;
    if (rep.exit_status == 0 && !rep.all_pass()) rep.exit_status = 1;
    std::cout << render_report(rep, opt.format);
    return rep.exit_status;
}

template <class Fn>
int guarded(RunReport& rep, FileStore& store, const Options& opt, Fn&& fn) {
    try {
        fn();
    } catch (const InternalError& e) {
        rep.add_check("internal consistency", false, e.what());
        rep.exit_status = 3;
    } catch (const InputError& e) {
        rep.add_check("input", false, e.what());
        rep.exit_status = 2;
    } catch (const DomainError& e) {
        rep.add_check("input", false, e.what());
        rep.exit_status = 2;
    }
    return finish(rep, store, opt);
}

/* ---------- validate ---------- */

int cmd_validate(const std::vector<std::string>& paths, const Options& opt,
                 RunReport& rep) {
    FileStore store;
    for (const std::string& path : paths) {
        try {
            std::string kind = file_kind(path, store);
            if (kind == "groupoid")
                load_groupoid(path, store);
            else if (kind == "rep")
                load_rep(path, store);
            else if (kind == "morphism")
                load_morphism(path, store);
            else if (kind == "sset")
                load_sset(path, store);
            else if (kind == "sset_map")
                load_sset_map(path, store);
            else
                throw InputError(path + ": unknown kind '" + kind + "'");
            rep.add_check("valid " + kind + ": " + path, true);
        } catch (const InputError& e) {
            rep.add_check("file: " + path, false, e.what());
            rep.exit_status = 2;
        } catch (const DomainError& e) {
            rep.add_check("file: " + path, false, e.what());
            rep.exit_status = 2;
        }
    }
    return finish(rep, store, opt);
}

/* ---------- cohomology ---------- */

int cmd_cohomology(const std::string& gpath, const std::string& rpath,
                   const Options& opt, RunReport& rep) {
    FileStore store;
    return guarded(rep, store, opt, [&] {
        auto g = load_groupoid(gpath, store);
        auto r = load_rep(rpath, store);
        if (r->base != g && !(*r->base == *g))
            throw InputError(rpath + ": coefficients live over a different groupoid "
                                     "than " + gpath);
        int cap = degree_or(opt, 4);
        ComplexPresentation p = build_complex(r, cap, opt.normalized);
        bool square_zero = true;
        for (int n = p.lo; n <= cap - 2; ++n)
            square_zero = square_zero && (p.diff(n + 1) * p.diff(n)).is_zero();
        rep.add_check("coboundary squares to zero", square_zero);
        std::map<int, int> dims = cohomology_dims(p);
        rep.add_table(opt.normalized ? "cohomology (normalized complex)"
                                     : "cohomology",
                      p.lo, map_to_row(dims));
    });
}

/* ---------- morita ---------- */

Json classify_payload(const MorphismClass& cls) {
    Json j;
    j["surjective_on_objects"] = cls.f1;
    j["arrow_lifting"] = cls.f2;
    j["essentially_surjective"] = cls.es;
    j["fully_faithful"] = cls.ff;
    j["fibration"] = cls.fibration();
    j["hypercover"] = cls.hypercover();
    return j;
}

int cmd_morita(const std::string& fpath, const std::string& rpath,
               const Options& opt, RunReport& rep) {
    FileStore store;
    return guarded(rep, store, opt, [&] {
        GroupoidMorphism f = load_morphism(fpath, store);
        auto r = load_rep(rpath, store);
        if (r->base != f.cod && !(*r->base == *f.cod))
            throw InputError(rpath + ": coefficients live over a different groupoid "
                                     "than the codomain of " + fpath);
        MoritaOptions mo;
        mo.cap = degree_or(opt, 4);
        MoritaReport m = morita_verify(f, r, mo);
        rep.add_certificate("morphism classification", classify_payload(m.cls));
        if (!m.hypercover) {
            rep.add_check("precondition: morphism is a hypercover", false,
                          "surjective on objects: " + yesno(m.cls.f1) +
                              ", fully faithful: " + yesno(m.cls.ff));
            rep.exit_status = 2;
            return;
        }
        rep.add_check("precondition: morphism is a hypercover", true);
        rep.add_check("semi-direct product commutes with base change", m.cartesian);
        rep.add_check("cohomology dims equal on both ends", m.dims_equal);
        std::string degs;
        for (const auto& [n, ok] : m.bijective)
            if (!ok) degs += (degs.empty() ? "" : ", ") + std::to_string(n);
        rep.add_check("induced map on cohomology bijective through degree " +
                          std::to_string(m.cap - 1),
                      m.induced_all_bijective(),
                      degs.empty() ? "" : "fails at " + degs);
        rep.add_check("three pipelines agree pairwise (codomain)", m.pipelines_cod);
        rep.add_check("three pipelines agree pairwise (domain)", m.pipelines_dom);
        rep.add_check("all filtration stages quasi-isomorphic", m.stages_equal);

        rep.add_table("direct complex (codomain)", m.lo, map_to_row(m.direct_cod));
        rep.add_table("direct complex (domain)", m.lo, map_to_row(m.direct_dom));
        rep.add_table("linear complex (codomain)", -m.shift, m.table_cod.lin_row);
        rep.add_table("projectable rows (codomain)", -m.shift, m.table_cod.proj_row);
        rep.add_table("linear complex (domain)", -m.shift, m.table_dom.lin_row);
        rep.add_table("projectable rows (domain)", -m.shift, m.table_dom.proj_row);
        Json stages;
        for (const char* side : {"codomain", "domain"}) {
            const FiltrationTable& t =
                side == std::string("codomain") ? m.table_cod : m.table_dom;
            Json rows;
            for (const auto& [mm, row] : t.rows) rows[std::to_string(mm)] = row;
            stages[side] = std::move(rows);
        }
        rep.add_certificate("filtration stage rows", std::move(stages));
    });
}

/* ---------- descent ---------- */

int cmd_descent(const std::string& path, const Options& opt, RunReport& rep) {
    FileStore store;
    return guarded(rep, store, opt, [&] {
        SimplicialMap f = load_sset_map(path, store);
        int top = degree_or(opt, std::max(f.dom->cap - 1, 0));
        DescentReport d = descent_verify(f, top);
        rep.add_check("transfer splits the restriction (mu f* = id)", d.section_ok);
        rep.add_check("transfer is a chain map", d.chain_map_ok);
        rep.add_check("prism homotopy certifies id - f* mu exactly", d.homotopy_ok);
        rep.add_check("cohomology dims agree through degree " + std::to_string(top),
                      d.dims_ok);
        rep.add_table("H (domain)", 0, d.dims_dom);
        rep.add_table("H (codomain)", 0, d.dims_cod);
        Json cert;
        cert["simple_stage"] = d.stage;
        cert["trivial_fibers"] = d.trivial;
        cert["injective_index_choice"] = d.injective_alpha;
        Json hist = Json::array();
        for (size_t n = 0; n < d.fiber_hist.size(); ++n) {
            Json e;
            e["level"] = static_cast<int>(n);
            Json sizes;
            for (const auto& [size, count] : d.fiber_hist[n])
                sizes[std::to_string(size)] = count;
            e["fibers"] = std::move(sizes);
            hist.push_back(std::move(e));
        }
        cert["fiber_histogram"] = std::move(hist);
        rep.add_certificate("transfer data", std::move(cert));
        if (opt.dump_matrices) {
            Json mats;
            Json tr = Json::array(), ho = Json::array();
            for (const QMat& m : d.transfer) tr.push_back(matrix_to_json(m));
            for (const QMat& m : d.homotopy) ho.push_back(matrix_to_json(m));
            mats["transfer"] = std::move(tr);
            mats["homotopy"] = std::move(ho);
            rep.add_certificate("matrices", std::move(mats));
        }
    });
}

/* ---------- cosk-tower ---------- */

int cmd_cosk_tower(const std::string& path, const Options& opt, RunReport& rep) {
    FileStore store;
    return guarded(rep, store, opt, [&] {
        SimplicialMap f = load_sset_map(path, store);
        int cap = std::min(f.dom->cap, f.cod->cap);
        if (opt.max_degree >= 0) cap = std::min(cap, opt.max_degree);
        CoskTower t = coskeleton_tower(f, cap);
        rep.add_check("map factors through the tower down to the base", t.factors);
        rep.add_check("comparison at the top stage is bijective", t.top_bijective);
        Json alpha = Json::array();
        for (const TowerStep& st : t.steps) {
            std::string tag = "stage " + std::to_string(st.m);
            bool squares_ok = true;
            Json sq = Json::array();
            for (const SquareReport& s : st.squares) {
                squares_ok = squares_ok && s.cartesian;
                Json e;
                e["level"] = s.n;
                e["cartesian"] = s.cartesian;
                e["injective_index_choice"] = s.injective_alpha;
                sq.push_back(std::move(e));
            }
            rep.add_check(tag + ": hypercover, simple at its own stage",
                          st.flags.is_hypercover() && st.simple_ok);
            rep.add_check(tag + ": comparison squares cartesian", squares_ok);
            Json e;
            e["stage"] = st.m;
            e["squares"] = std::move(sq);
            alpha.push_back(std::move(e));
        }
        rep.add_certificate("square checks by stage", std::move(alpha));
    });
}

/* ---------- sdp-check ---------- */

int cmd_sdp_check(const std::string& rpath, const Options& opt, RunReport& rep) {
    FileStore store;
    return guarded(rep, store, opt, [&] {
        auto r = load_rep(rpath, store);
        int cap = degree_or(opt, 4);
        SdpBundle v = sdp_build(r, cap);
        auto viol = verify_simplicial_identities(v);
        if (viol) {
            rep.add_check("simplicial identities of the semi-direct product", false,
                          viol->identity + " at index " + viol->alpha.str());
            rep.exit_status = 3;
        } else {
            rep.add_check("simplicial identities of the semi-direct product", true);
        }
        bool square_zero = true;
        std::vector<int> level_dims;
        std::vector<QMat> delta(cap);
        for (int n = 0; n < cap; ++n) delta[n] = lin_delta_matrix(v, n);
        for (int n = 0; n + 1 < cap; ++n)
            square_zero = square_zero && (delta[n + 1] * delta[n]).is_zero();
        if (!square_zero) rep.exit_status = 3;
        rep.add_check("linear coboundary squares to zero", square_zero);
        for (int n = 0; n <= cap; ++n) level_dims.push_back(v.level(n).total_dim);
        rep.add_table("linear cochain dimensions by level", 0, level_dims);
    });
}

/* ---------- filtration-check ---------- */

int cmd_filtration_check(const std::string& rpath, const Options& opt,
                         RunReport& rep) {
    FileStore store;
    return guarded(rep, store, opt, [&] {
        auto loaded = load_rep(rpath, store);
        int k = std::max(0, -loaded->bundle.lo);
        std::shared_ptr<const RepUpToHomotopy> r = loaded;
        if (k > 0) {
            r = std::make_shared<const RepUpToHomotopy>(shift_ruth(*loaded, k));
            rep.add_check("degrees shifted up by " + std::to_string(k) +
                              " to enter the semi-direct product",
                          true);
        }
        int cap = std::max(1, degree_or(opt, 4));
        FiltrationTable t = filtration_cohomology(r, cap);
        bool stages_ok = t.proj_row == t.lin_row;
        for (const auto& [m, row] : t.rows)
            stages_ok = stages_ok && row == t.lin_row;
        rep.add_check("every filtration stage is quasi-isomorphic to the whole",
                      stages_ok);
        rep.add_table("full linear complex", 0, t.lin_row);
        rep.add_table("projectable subcomplex", 0, t.proj_row);
        Json rows;
        for (const auto& [m, row] : t.rows) rows[std::to_string(m)] = row;
        rep.add_certificate("stage rows", std::move(rows));

        // smoothing certificates: iterate the homotopy on closed stage
        // cochains and exhibit the exact primitive for the displacement
        SdpBundle v = sdp_build(r, cap + 1);
        int certified = 0;
        bool smoothing_ok = true;
        Json prims = Json::array();
        for (int m = 0; m <= 1; ++m)
            for (int n = 2; n <= std::min(3, cap - 1); ++n) {
                QMat d = lin_delta_matrix(v, n);
                QMat b = detail::stage_basis(v, d, n, [m](const OrdinalMap& a) {
                    return m_regular_index(a, m);
                });
                QMat z = b * rank_and_kernel(d * b).kernel;
                for (int j = 0; j < z.cols(); ++j) {
                    QMat col = z.column(j);
                    if (col.is_zero()) continue;
                    LinearCochain c = lin_from_column(v, n, col);
                    auto it = regularize_iterated(v, c, m);
                    bool landed = lin_defect(it.image, m) == 0 &&
                                  m_regularity(v, it.image, m + 1).m_projectable;
                    LinearCochain p = it.primitive;
                    p.n = n - 1;
                    QMat moved = lin_to_column(v, it.image) - col;
                    bool exact = moved == lin_to_column(v, lin_delta(v, p));
                    smoothing_ok = smoothing_ok && landed && exact;
                    ++certified;
                    if (opt.dump_matrices) {
                        Json e;
                        e["stage"] = m;
                        e["level"] = n;
                        e["primitive"] = matrix_to_json(lin_to_column(v, p));
                        prims.push_back(std::move(e));
                    }
                }
            }
        rep.add_check("iterated smoothing lands one stage up with exact primitives",
                      smoothing_ok, std::to_string(certified) + " closed cochains");
        if (opt.dump_matrices) rep.add_certificate("primitives", std::move(prims));
    });
}

/* ---------- lambda-check ---------- */

int cmd_lambda_check(const std::string& rpath, const Options& opt, RunReport& rep) {
    FileStore store;
    return guarded(rep, store, opt, [&] {
        auto r = load_rep(rpath, store);
        int top = degree_or(opt, 4);
        SdpBundle v = sdp_build(r, top + 1);
        ComplexPresentation p = build_complex(v.dual, top + 1);
        std::vector<int> proj_dims;
        for (int n = 0; n <= top; ++n) {
            QMat m(v.level(n).total_dim, p.dim(n));
            bool projectable = true, conjugates = true;
            for (int c0 = 0; c0 < p.dim(n); ++c0) {
                QMat x(p.dim(n), 1);
                x.set(c0, 0, Rat(1));
                Cochain c = cochain_from_coordinates(p, x, n);
                LinearCochain l = lambda(v, c);
                projectable = projectable && projectability(v, l).projectable;
                QMat col = lin_to_column(v, l);
                for (int i = 0; i < col.rows(); ++i)
                    if (col.at(i, 0) != 0) m.set(i, c0, col.at(i, 0));
                LinearCochain lhs = lin_delta(v, l);
                LinearCochain rhs = lambda(v, differential(c));
                lhs.prune();
                rhs.prune();
                lhs.n = rhs.n = n + 1;
                conjugates =
                    conjugates && lin_to_column(v, lhs) == lin_to_column(v, rhs);
            }
            QMat d = lin_delta_matrix(v, n);
            QMat proj = detail::stage_basis(v, d, n, regular_index);
            proj_dims.push_back(proj.cols());
            bool bijective = projectable && rank_of(m) == p.dim(n) &&
                             proj.cols() == p.dim(n);
            std::string tag = "level " + std::to_string(n);
            rep.add_check(tag + ": transport is a bijection onto projectable rows",
                          bijective);
            rep.add_check(tag + ": transport conjugates the differentials",
                          conjugates);
        }
        rep.add_table("projectable row dimensions by level", 0, proj_dims);
    });
}

}  // namespace

int main(int argc, char** argv) {
    std::ios::sync_with_stdio(false);
    // The only environment knob; every kernel here is serial, so this is
    // parsed for forward compatibility and otherwise ignored.
    if (const char* threads = std::getenv("GROCO_THREADS")) (void)threads;

    CLI::App app{"exact-arithmetic checks for groupoid cohomology with "
                 "homotopy coefficients"};
    app.require_subcommand(1);
    Options opt;

    std::vector<std::string> validate_paths;
    CLI::App* c_validate =
        app.add_subcommand("validate", "load files and run their validators");
    c_validate->add_option("paths", validate_paths, "artifact files")
        ->required()
        ->expected(-1);
    add_common_flags(c_validate, opt);

    std::string arg_groupoid, arg_rep, arg_morphism, arg_map;
    CLI::App* c_cohomology = app.add_subcommand(
        "cohomology", "dimension table of the cochain complex");
    c_cohomology->add_option("groupoid", arg_groupoid, "groupoid file")->required();
    c_cohomology->add_option("rep", arg_rep, "coefficient file")->required();
    add_common_flags(c_cohomology, opt);

    CLI::App* c_morita = app.add_subcommand(
        "morita", "invariance of cohomology along a groupoid hypercover");
    c_morita->add_option("morphism", arg_morphism, "morphism file")->required();
    c_morita->add_option("rep", arg_rep, "coefficient file over the codomain")
        ->required();
    add_common_flags(c_morita, opt);

    CLI::App* c_descent = app.add_subcommand(
        "descent", "transfer and homotopy along a simplicial hypercover");
    c_descent->add_option("map", arg_map, "simplicial map file")->required();
    add_common_flags(c_descent, opt);

    CLI::App* c_tower = app.add_subcommand(
        "cosk-tower", "factor a simplicial map through its coskeleton tower");
    c_tower->add_option("map", arg_map, "simplicial map file")->required();
    add_common_flags(c_tower, opt);

    CLI::App* c_sdp =
        app.add_subcommand("sdp-check", "simplicial identities of the "
                                        "semi-direct product");
    c_sdp->add_option("rep", arg_rep, "coefficient file")->required();
    add_common_flags(c_sdp, opt);

    CLI::App* c_filt = app.add_subcommand(
        "filtration-check", "stagewise cohomology of the support filtration");
    c_filt->add_option("rep", arg_rep, "coefficient file")->required();
    add_common_flags(c_filt, opt);

    CLI::App* c_lambda = app.add_subcommand(
        "lambda-check", "transport onto projectable rows is an isomorphism");
    c_lambda->add_option("rep", arg_rep, "coefficient file")->required();
    add_common_flags(c_lambda, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    RunReport rep;
    std::string echo = "groco";
    for (int i = 1; i < argc; ++i) echo += std::string(" ") + argv[i];
    rep.command = echo;

    if (app.got_subcommand(c_validate)) return cmd_validate(validate_paths, opt, rep);
    if (app.got_subcommand(c_cohomology))
        return cmd_cohomology(arg_groupoid, arg_rep, opt, rep);
    if (app.got_subcommand(c_morita)) return cmd_morita(arg_morphism, arg_rep, opt, rep);
    if (app.got_subcommand(c_descent)) return cmd_descent(arg_map, opt, rep);
    if (app.got_subcommand(c_tower)) return cmd_cosk_tower(arg_map, opt, rep);
    if (app.got_subcommand(c_sdp)) return cmd_sdp_check(arg_rep, opt, rep);
    if (app.got_subcommand(c_filt)) return cmd_filtration_check(arg_rep, opt, rep);
    if (app.got_subcommand(c_lambda)) return cmd_lambda_check(arg_rep, opt, rep);
    return 2;
}
