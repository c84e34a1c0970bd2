// tgd: command-line front end for building TGD operators and applying them.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tgd/tgd.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kValidation = 2, kIo = 3 };

int exit_code(tgd::ErrorCode c) {
    switch (c) {
        case tgd::ErrorCode::Usage:
        case tgd::ErrorCode::MissingSeed: return kUsage;
        case tgd::ErrorCode::Io: return kIo;
        default: return kValidation;
    }
}

struct Globals {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string boundary = "replicate";
    bool integer = false;
    bool norm_constant = false;
};

struct KernelArgs {
    std::string family = "gaussian";
    std::optional<double> delta, k, tau, n, lambda, W;
    std::string c = "auto";
    std::vector<double> table;

    void add(CLI::App* app) {
        app->add_option("--kernel", family, "kernel family")
            ->check(CLI::IsMember({"gaussian", "linear", "exponential", "landau", "weibull", "table"}));
        app->add_option("--delta", delta, "gaussian/exponential width");
        app->add_option("--k", k, "linear slope or weibull shape");
        app->add_option("--c", c, "linear intercept or 'auto'");
        app->add_option("--tau", tau, "landau tau");
        app->add_option("--n", n, "landau exponent");
        app->add_option("--lambda", lambda, "weibull scale");
        app->add_option("--table", table, "table kernel samples")->delimiter(',');
    }

    tgd::KernelSpec build(double support) const {
        tgd::ParamMap p;
        if (delta) p["delta"] = *delta;
        if (k) p["k"] = *k;
        if (tau) p["tau"] = *tau;
        if (n) p["n"] = *n;
        if (lambda) p["lambda"] = *lambda;
        if (c != "auto") {
            try {
                p["c"] = std::stod(c);
            } catch (const std::exception&) {
                throw tgd::Error(tgd::ErrorCode::Usage, "--c expects a number or 'auto'");
            }
        }
        return tgd::make_kernel(tgd::parse_family(family), p, support, table);
    }
};

struct OpArgs {
    KernelArgs kernel;
    int N = 0;
    std::string order = "1";
    int dims = 1;
    std::string construction = "orthogonal";
    int axis = -1;
    std::vector<double> direction;
    std::optional<double> theta;
    std::string rotation_weight = "cosine";
    bool sample = false;

    void add(CLI::App* app) {
        kernel.add(app);
        app->add_option("--N", N, "kernel size (W = N + 1/2)");
        app->add_option("--order", order, "1, 2, first or second");
        app->add_option("--dims", dims, "1, 2 or 3")->check(CLI::Range(1, 3));
        app->add_option("--construction", construction, "rotational, orthogonal or lot")
            ->check(CLI::IsMember({"rotational", "orthogonal", "lot"}));
        app->add_option("--axis", axis, "differencing axis for orthogonal operators (default: last axis)");
        app->add_option("--direction", direction, "direction in axis order")->delimiter(',');
        app->add_option("--theta", theta, "2-D direction angle in radians, x = axis 1, y = axis 0");
        app->add_option("--rotation-weight", rotation_weight, "cosine or constant")
            ->check(CLI::IsMember({"cosine", "constant"}));
        app->add_flag("--sample", sample, "sample the continuous operator instead of interval integrals");
    }
};

using AnyOp = std::variant<tgd::DiscreteOperator1D, tgd::DiscreteOperatorND>;

AnyOp generate(const OpArgs& a, bool integer) {
    if (a.N < 1) throw tgd::Error(tgd::ErrorCode::Usage, "--N is required (N >= 1)");
    const auto order = tgd::parse_order(a.order);
    const auto kernel = a.kernel.build(a.N + 0.5);
    if (a.dims == 1) {
        auto op = a.sample ? tgd::discretize_by_sampling(kernel, a.N, order)
                           : tgd::discretize(tgd::build_continuous(kernel, order), a.N);
        if (integer) op = tgd::to_integer_scale(op);
        return op;
    }
    tgd::DiscreteOperatorND op;
    const auto rw = tgd::make_rotation_weight(tgd::parse_rotation_family(a.rotation_weight));
    if (a.construction == "lot") {
        op = tgd::lot_operator(kernel, a.dims, a.N);
    } else if (a.theta) {
        if (a.dims != 2) throw tgd::Error(tgd::ErrorCode::UnsupportedDims, "--theta needs --dims 2");
        const tgd::RotationSpec spec = a.construction == "rotational" ? tgd::RotationSpec{rw} : tgd::RotationSpec{tgd::OrthogonalSpec{}};
        op = tgd::rotate_operator(kernel, spec, *a.theta, order, a.N);
    } else if (a.construction == "rotational") {
        std::vector<double> dir = a.direction;
        if (dir.empty()) {
            dir.assign(static_cast<std::size_t>(a.dims), 0.0);
            dir.back() = 1.0;
        }
        op = tgd::rotational_operator(kernel, rw, dir, order, a.dims, a.N);
    } else {
        const int axis = a.axis >= 0 ? a.axis : a.dims - 1;
        const auto disc = a.sample ? tgd::Discretization::direct_sample : tgd::Discretization::interval_integral;
        op = tgd::orthogonal_operator(kernel, axis, order, a.dims, a.N, disc);
    }
    if (integer) op = tgd::to_integer_scale_nd(op);
    return op;
}

json op_json(const AnyOp& op) {
    return std::visit([](const auto& o) { return tgd::io::to_json(o); }, op);
}

AnyOp load_op(const fs::path& p) {
    json j;
    try {
        j = json::parse(tgd::io::read_text(p));
    } catch (const json::parse_error& e) {
        throw tgd::Error(tgd::ErrorCode::Io, std::string("cannot parse operator: ") + e.what());
    }
    if (j.contains("dims")) return tgd::io::operatornd_from_json(j);
    return tgd::io::operator1d_from_json(j);
}

json report_json(const tgd::ConstraintReport& r) {
    json j;
    j["c1_ok"] = r.c1_ok;
    j["c2_ok"] = r.c2_ok;
    j["c3_ok"] = r.c3_ok;
    j["c1_error"] = r.c1_error;
    j["min_w"] = {{"value", r.positivity.magnitude}, {"t", r.positivity.location}};
    j["max_increase"] = {{"value", r.monotonicity.magnitude}, {"t", r.monotonicity.location}};
    j["smooth"] = {{"interior_ok", r.smooth.interior_ok},
                   {"boundary_ok", r.smooth.boundary_ok},
                   {"S_at_W", r.smooth.s_at_W},
                   {"dS_at_W", r.smooth.ds_at_W},
                   {"d2S_at_W", r.smooth.d2s_at_W},
                   {"worst_slope", {{"value", r.smooth.slope.magnitude}, {"x", r.smooth.slope.location}}},
                   {"worst_curvature", {{"value", r.smooth.curvature.magnitude}, {"x", r.smooth.curvature.location}}}};
    return j;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        tgd::io::write_text(path, text);
    }
}

// ---- --config expansion ----

std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::string cfg;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) cfg = args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) cfg = args[i].substr(9);
    }
    if (cfg.empty()) return args;
    json j;
    try {
        j = json::parse(tgd::io::read_text(cfg));
    } catch (const json::parse_error& e) {
        throw tgd::Error(tgd::ErrorCode::Io, std::string("cannot parse config: ") + e.what());
    }
    if (!j.is_object()) throw tgd::Error(tgd::ErrorCode::Usage, "config must be a JSON object");
    auto given = [&](const std::string& flag) {
        for (const auto& a : args) {
            if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
        }
        return false;
    };
    static const std::vector<std::string> verbs = {"gen-op", "apply", "noise", "metrics", "spectrum", "validate-kernel"};
    const bool has_verb = std::any_of(args.begin(), args.end(),
                                      [&](const std::string& a) { return std::find(verbs.begin(), verbs.end(), a) != verbs.end(); });
    if (!has_verb && j.contains("command")) args.push_back(j["command"].get<std::string>());
    for (const auto& [key, value] : j.items()) {
        if (key == "command" || key == "config") continue;
        const std::string flag = "--" + key;
        if (given(flag)) continue;
        if (value.is_boolean()) {
            if (value.get<bool>()) args.push_back(flag);
        } else if (value.is_array()) {
            std::string joined;
            for (const auto& v : value) {
                if (!joined.empty()) joined += ",";
                joined += v.is_string() ? v.get<std::string>() : v.dump();
            }
            args.push_back(flag);
            args.push_back(joined);
        } else if (value.is_string()) {
            args.push_back(flag);
            args.push_back(value.get<std::string>());
        } else if (value.is_number()) {
            args.push_back(flag);
            args.push_back(value.dump());
        } else {
            throw tgd::Error(tgd::ErrorCode::Usage, "unsupported config value for '" + key + "'");
        }
    }
    return args;
}

std::vector<double> column(const tgd::SampledField<double>& f) { return f.values; }

std::vector<std::size_t> parse_edges(const std::vector<double>& e) {
    std::vector<std::size_t> out;
    for (double v : e) {
        if (v < 0.0 || v != std::floor(v)) throw tgd::Error(tgd::ErrorCode::Usage, "edges must be sample indices");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    Globals g;
    CLI::App app{"Tao general difference operators: build, apply, inspect"};
    app.name("tgd");
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--config", g.config, "JSON file whose keys fill in flags not given on the command line");
    app.add_option("--seed", g.seed, "PRNG seed");
    app.add_option("--boundary", g.boundary, "replicate, reflect, zero or valid")
        ->check(CLI::IsMember({"replicate", "reflect", "zero", "valid"}));
    app.add_flag("--integer", g.integer, "integer-scaled operators");
    app.add_flag("--norm-constant", g.norm_constant, "multiply results by the operator's norm constant");

    // gen-op
    OpArgs gen;
    std::string gen_out, gen_csv;
    auto* cmd_gen = app.add_subcommand("gen-op", "generate an operator as JSON");
    gen.add(cmd_gen);
    cmd_gen->add_option("--out,-o", gen_out, "output JSON (default stdout)");
    cmd_gen->add_option("--csv", gen_csv, "also write a 2-D operator as a CSV matrix");

    // apply
    OpArgs app_op;
    std::string in_path, out_path, op_path, compare;
    std::optional<double> smooth_sigma;
    bool separable = false;
    auto* cmd_apply = app.add_subcommand("apply", "convolve a field with an operator");
    app_op.add(cmd_apply);
    cmd_apply->add_option("--input,-i", in_path, "input field (.csv, .pgm, .json volume)")->required();
    cmd_apply->add_option("--output,-o", out_path, "output field (default stdout for 1-D/2-D)");
    cmd_apply->add_option("--op", op_path, "operator JSON (otherwise generated from flags)");
    cmd_apply->add_option("--compare", compare, "1-D baselines: central,ld,smoothdiff");
    cmd_apply->add_option("--smooth-sigma", smooth_sigma, "sigma for smoothdiff (default (N+1/2)/3)");
    cmd_apply->add_flag("--separable", separable, "use the separable path when available");

    // noise
    std::string noise_in, noise_out;
    double noise_sigma = 0.0;
    auto* cmd_noise = app.add_subcommand("noise", "add seeded Gaussian noise");
    cmd_noise->add_option("--input,-i", noise_in, "input field")->required();
    cmd_noise->add_option("--output,-o", noise_out, "output path")->required();
    cmd_noise->add_option("--sigma", noise_sigma, "noise standard deviation")->check(CLI::NonNegativeNumber);

    // metrics
    std::string m_a, m_b, m_out;
    std::vector<double> m_edges;
    std::size_t m_window = 0;
    auto* cmd_metrics = app.add_subcommand("metrics", "compare two aligned fields");
    cmd_metrics->add_option("--a", m_a, "field under test")->required();
    cmd_metrics->add_option("--b", m_b, "reference field");
    cmd_metrics->add_option("--edges", m_edges, "true edge indices (edge lies between e-1 and e)")->delimiter(',');
    cmd_metrics->add_option("--window", m_window, "search half-window around each edge (default: half the edge spacing)");
    cmd_metrics->add_option("--output,-o", m_out, "output JSON (default stdout)");

    // spectrum
    OpArgs sp;
    std::string sp_op, sp_out, sp_compare;
    std::vector<double> sp_weights;
    std::size_t n_fft = 512;
    bool sp_smooth = false;
    auto* cmd_spec = app.add_subcommand("spectrum", "magnitude spectrum of an operator");
    sp.add(cmd_spec);
    cmd_spec->add_option("--op", sp_op, "operator JSON");
    cmd_spec->add_option("--weights", sp_weights, "explicit weights")->delimiter(',');
    cmd_spec->add_flag("--smooth", sp_smooth, "use the kernel's smooth operator (with --N)");
    cmd_spec->add_option("--n-fft", n_fft, "transform length (power of two)");
    cmd_spec->add_option("--compare", sp_compare, "'gaussian' adds an equal-support Gaussian filter column");
    cmd_spec->add_option("--output,-o", sp_out, "output CSV (default stdout)");

    // validate-kernel
    KernelArgs vk;
    double vk_W = 3.0;
    auto* cmd_val = app.add_subcommand("validate-kernel", "check C1/C2/C3 for a kernel");
    vk.add(cmd_val);
    cmd_val->add_option("--W", vk_W, "support half-width");

    try {
        std::vector<std::string> args(argv, argv + argc);
        args = expand_config(args);
        std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
        try {
            app.parse(rev);
        } catch (const CLI::ParseError& e) {
            return app.exit(e) == 0 ? kOk : kUsage;
        }
        const auto boundary = tgd::parse_boundary(g.boundary);

        if (*cmd_gen) {
            const auto op = generate(gen, g.integer);
            const auto kernel = gen.kernel.build(gen.N + 0.5);
            std::cerr << report_json(tgd::validate_constraints(kernel)).dump() << "\n";
            emit(gen_out, op_json(op).dump(2) + "\n");
            if (!gen_csv.empty()) {
                const auto* nd = std::get_if<tgd::DiscreteOperatorND>(&op);
                if (!nd) throw tgd::Error(tgd::ErrorCode::Usage, "--csv needs a 2-D operator");
                tgd::io::write_text(gen_csv, tgd::io::operator_csv(*nd));
            }
            return kOk;
        }

        if (*cmd_apply) {
            const auto field = tgd::io::read_field(in_path);
            const AnyOp op = op_path.empty() ? generate(app_op, g.integer) : load_op(op_path);
            tgd::SampledField<double> out;
            if (const auto* o1 = std::get_if<tgd::DiscreteOperator1D>(&op)) {
                out = tgd::tgd_1d(field, *o1, boundary, g.norm_constant);
            } else {
                const auto& nd = std::get<tgd::DiscreteOperatorND>(op);
                if (field.dims() != nd.dims) throw tgd::Error(tgd::ErrorCode::DimsMismatch, "field and operator dimensions differ");
                out = tgd::tgd_nd(field, nd, boundary, g.norm_constant, separable && nd.separable_factors.has_value());
            }
            if (compare.empty()) {
                if (out.dims() == 3) {
                    if (out_path.empty()) throw tgd::Error(tgd::ErrorCode::Usage, "3-D output needs --output");
                    tgd::io::write_raw3d(out_path, out);
                } else {
                    emit(out_path, tgd::io::csv_text(out));
                }
                return kOk;
            }
            const auto* o1 = std::get_if<tgd::DiscreteOperator1D>(&op);
            if (!o1 || boundary == tgd::Boundary::valid) {
                throw tgd::Error(tgd::ErrorCode::Usage, "--compare needs a 1-D operator and a padded boundary");
            }
            std::vector<std::string> names{"tgd"};
            std::vector<std::vector<double>> cols{out.values};
            std::stringstream ss(compare);
            std::string item;
            const double h = field.spacing.empty() ? 1.0 : field.spacing[0];
            while (std::getline(ss, item, ',')) {
                tgd::SampledField<double> r;
                if (item == "central") {
                    r = tgd::baseline_central_difference(field, o1->order == tgd::Order::first ? 1 : 2, boundary);
                    if (g.norm_constant) {
                        for (auto& v : r.values) v /= (o1->order == tgd::Order::first ? h : h * h);
                    }
                } else if (item == "ld") {
                    r = tgd::tgd_1d(field, tgd::baseline_ld_operator(o1->N), boundary, g.norm_constant);
                } else if (item == "smoothdiff") {
                    r = tgd::baseline_smooth_then_diff(field, smooth_sigma.value_or((o1->N + 0.5) / 3.0), boundary);
                    if (g.norm_constant) {
                        for (auto& v : r.values) v /= h;
                    }
                } else {
                    throw tgd::Error(tgd::ErrorCode::Usage, "unknown baseline '" + item + "'");
                }
                names.push_back(item);
                cols.push_back(r.values);
            }
            std::string text;
            for (std::size_t c = 0; c < names.size(); ++c) text += (c ? "," : "") + names[c];
            text += "\n";
            for (std::size_t i = 0; i < out.size(); ++i) {
                for (std::size_t c = 0; c < cols.size(); ++c) text += (c ? "," : "") + tgd::io::format_double(cols[c][i]);
                text += "\n";
            }
            emit(out_path, text);
            return kOk;
        }

        if (*cmd_noise) {
            if (!g.seed) throw tgd::Error(tgd::ErrorCode::MissingSeed, "noise requires --seed");
            if (noise_sigma == 0.0) {
                tgd::io::write_text(noise_out, tgd::io::read_text(noise_in));
                return kOk;
            }
            auto field = tgd::io::read_field(noise_in);
            field = tgd::add_gaussian_noise(field, noise_sigma, *g.seed);
            if (fs::path(noise_out).extension() == ".pgm" || field.dims() == 3) {
                tgd::io::write_field(noise_out, field);
            } else {
                tgd::io::write_csv(noise_out, field);
            }
            return kOk;
        }

        if (*cmd_metrics) {
            const auto a = tgd::io::read_field(m_a);
            json j;
            const auto av = column(a);
            j["zero_crossings"] = tgd::zero_crossings(av);
            j["extrema"] = tgd::local_extrema(av);
            if (!m_b.empty()) {
                const auto b = tgd::io::read_field(m_b);
                if (a.shape != b.shape) throw tgd::Error(tgd::ErrorCode::ShapeMismatch, "fields have different shapes");
                const auto bv = column(b);
                j["pearson"] = tgd::pearson(av, bv);
                j["rmse"] = tgd::rmse(av, bv);
                std::vector<double> offs;
                for (double zb : tgd::zero_crossings(bv)) {
                    double best = std::numeric_limits<double>::infinity();
                    for (double za : tgd::zero_crossings(av)) best = std::min(best, std::abs(za - zb));
                    offs.push_back(best);
                }
                j["zero_crossing_offsets_vs_b"] = offs;
            }
            if (!m_edges.empty()) {
                if (a.dims() != 1) throw tgd::Error(tgd::ErrorCode::Usage, "--edges applies to 1-D fields");
                const auto edges = parse_edges(m_edges);
                std::size_t window = m_window;
                if (window == 0) {
                    window = a.size();
                    for (std::size_t i = 1; i < edges.size(); ++i) window = std::min(window, (edges[i] - edges[i - 1]) / 2);
                    window = std::max<std::size_t>(window, 1);
                }
                const auto arg = tgd::argmax_edge_offsets(av, edges, window);
                const auto zc = tgd::crossing_edge_offsets(av, edges, window);
                j["argmax_edge_offsets"] = arg;
                j["zero_crossing_edge_offsets"] = zc;
                j["max_argmax_offset"] = *std::max_element(arg.begin(), arg.end());
                j["max_zero_crossing_offset"] = *std::max_element(zc.begin(), zc.end());
            }
            emit(m_out, j.dump(2) + "\n");
            return kOk;
        }

        if (*cmd_spec) {
            std::vector<double> w;
            if (!sp_weights.empty()) {
                w = sp_weights;
            } else if (!sp_op.empty()) {
                const auto op = load_op(sp_op);
                const auto* o1 = std::get_if<tgd::DiscreteOperator1D>(&op);
                if (!o1) throw tgd::Error(tgd::ErrorCode::Usage, "spectrum takes 1-D operators");
                w = o1->weights;
            } else if (sp_smooth) {
                if (sp.N < 1) throw tgd::Error(tgd::ErrorCode::Usage, "--smooth needs --N");
                const auto kernel = sp.kernel.build(sp.N + 0.5);
                tgd::build_continuous(kernel, tgd::Order::smooth);
                w = tgd::smooth_weights(kernel, sp.N, sp.sample ? tgd::Provenance::direct_sample : tgd::Provenance::interval_integral);
            } else {
                const auto op = generate(sp, g.integer);
                const auto* o1 = std::get_if<tgd::DiscreteOperator1D>(&op);
                if (!o1) throw tgd::Error(tgd::ErrorCode::Usage, "spectrum takes 1-D operators");
                w = o1->weights;
            }
            const auto mag = tgd::spectrum(w, n_fft);
            std::vector<double> ref;
            if (!sp_compare.empty()) {
                if (sp_compare != "gaussian") throw tgd::Error(tgd::ErrorCode::Usage, "--compare accepts 'gaussian'");
                ref = tgd::spectrum(tgd::equal_support_gaussian(static_cast<int>(w.size() / 2)), n_fft);
            }
            std::string text = ref.empty() ? "frequency,magnitude\n" : "frequency,magnitude,gaussian\n";
            for (std::size_t k = 0; k < mag.size(); ++k) {
                text += tgd::io::format_double(static_cast<double>(k) / static_cast<double>(n_fft)) + "," +
                        tgd::io::format_double(mag[k]);
                if (!ref.empty()) text += "," + tgd::io::format_double(ref[k]);
                text += "\n";
            }
            emit(sp_out, text);
            return kOk;
        }

        if (*cmd_val) {
            const auto kernel = vk.build(vk_W);
            const auto rep = tgd::validate_constraints(kernel);
            json j = report_json(rep);
            j["kernel"] = tgd::io::to_json(kernel);
            std::cout << j.dump(2) << "\n";
            return rep.c1_ok && rep.c2_ok && rep.c3_ok ? kOk : kValidation;
        }
    } catch (const tgd::Error& e) {
        std::cerr << "tgd: " << e.what() << "\n";
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "tgd: " << e.what() << "\n";
        return kIo;
    }
    return kUsage;
}
