#include "thickpave/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "thickpave/errors.hpp"
#include "thickpave/io.hpp"
#include "thickpave/paver.hpp"
#include "thickpave/sliding.hpp"

namespace thickpave::cli {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

int run_pave(const std::string& input, const std::string& out_path,
             const std::string& svg_path, double epsilon_override, int workers,
             std::uint64_t budget, std::ostream& out) {
    SystemDef sys = parse_system(read_file(input));
    double epsilon = epsilon_override > 0.0 ? epsilon_override : sys.epsilon;
    SetPtr sliding = build_sliding(sys.sliding_spec());
    PaveOptions options;
    options.workers = workers;
    options.box_budget = budget;
    Paving paving = pave(sliding, sys.domain, epsilon, options);

    write_file(out_path, write_paving(paving));
    if (!svg_path.empty()) write_file(svg_path, render_svg(paving, StyleMap::defaults()));

    out << "paved " << input << " at epsilon " << epsilon << " ("
        << paving.meta.elapsed_seconds << " s, " << paving.meta.bisections
        << " bisections)\n";
    for (std::size_t c = 0; c < 4; ++c)
        out << "  " << box_class_name(static_cast<BoxClass>(c)) << ": "
            << paving.meta.counts[c] << "\n";
    out << "  inner approximation empty: "
        << (paving.count(BoxClass::IN) == 0 ? "yes" : "no") << "\n";
    return 0;
}

int run_lie(const std::string& input, std::ostream& out) {
    SystemDef sys = parse_system(read_file(input));
    for (const RegionNode* leaf : collect_leaves(sys.region)) {
        Expr lie_a = lie_derivative(leaf->constraint, sys.field_a);
        Expr lie_b = lie_derivative(leaf->constraint, sys.field_b);
        out << leaf->name << ".c = " << to_string(leaf->constraint, sys.decl) << "\n";
        out << leaf->name << ".La = " << to_string(lie_a, sys.decl) << "\n";
        out << leaf->name << ".Lb = " << to_string(lie_b, sys.decl) << "\n";
    }
    return 0;
}

// Root of c along the segment a + t*(b - a), bisected from a bracketing
// sign change.
std::vector<double> refine_root(const Expr& c, std::span<const double> a,
                                std::span<const double> b, std::span<const double> p,
                                double t_lo, double t_hi) {
    auto at = [&](double t) {
        std::vector<double> x(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) x[i] = a[i] + t * (b[i] - a[i]);
        return x;
    };
    double f_lo = eval_point(c, at(t_lo), p);
    for (int iter = 0; iter < 60; ++iter) {
        double t_mid = 0.5 * (t_lo + t_hi);
        double f_mid = eval_point(c, at(t_mid), p);
        if (f_mid == 0.0) return at(t_mid);
        if ((f_lo <= 0.0) == (f_mid <= 0.0)) {
            t_lo = t_mid;
            f_lo = f_mid;
        } else {
            t_hi = t_mid;
        }
    }
    return at(0.5 * (t_lo + t_hi));
}

int run_check(const std::string& input, const std::string& paving_path, int samples,
              int param_samples, std::uint64_t seed, std::ostream& out) {
    SystemDef sys = parse_system(read_file(input));
    Paving paving = read_paving(read_file(paving_path));
    if (paving.domain.size() != sys.decl.states.size())
        throw std::runtime_error("check: paving dimension does not match the system");

    SetPtr sliding = build_sliding(sys.sliding_spec());
    auto leaves = collect_leaves(sys.region);
    std::size_t dims = sys.decl.states.size();

    std::vector<std::vector<double>> param_points;
    std::mt19937_64 rng(seed);
    param_points.push_back(sys.param_box.midpoint());
    for (int k = 0; k < param_samples; ++k) {
        std::vector<double> p(sys.param_box.size());
        for (std::size_t j = 0; j < p.size(); ++j) {
            std::uniform_real_distribution<double> dist(sys.param_box[j].lo(),
                                                        sys.param_box[j].hi());
            p[j] = dist(rng);
        }
        param_points.push_back(std::move(p));
    }

    std::uint64_t tested = 0, violations = 0;
    constexpr int kScanSteps = 12;

    for (const auto& p : param_points) {
        for (int i = 0; i < samples; ++i) {
            // Random probe segment across the domain.
            std::vector<double> a(dims), b(dims);
            for (std::size_t d = 0; d < dims; ++d) {
                std::uniform_real_distribution<double> dist(paving.domain[d].lo(),
                                                            paving.domain[d].hi());
                a[d] = dist(rng);
                b[d] = dist(rng);
            }
            for (const RegionNode* leaf : leaves) {
                double prev_t = 0.0;
                std::vector<double> x0(dims);
                for (std::size_t d = 0; d < dims; ++d) x0[d] = a[d];
                double prev_f = eval_point(leaf->constraint, x0, p);
                for (int step = 1; step <= kScanSteps; ++step) {
                    double t = static_cast<double>(step) / kScanSteps;
                    std::vector<double> xt(dims);
                    for (std::size_t d = 0; d < dims; ++d)
                        xt[d] = a[d] + t * (b[d] - a[d]);
                    double f = eval_point(leaf->constraint, xt, p);
                    if (std::isfinite(prev_f) && std::isfinite(f) &&
                        (prev_f <= 0.0) != (f <= 0.0)) {
                        auto root = refine_root(leaf->constraint, a, b, p, prev_t, t);
                        if (paving.domain.contains(root) &&
                            point_classify_thin(sliding, root, p) ==
                                PointVerdict::OnConstraint) {
                            ++tested;
                            if (paving_query(paving, root) == BoxClass::OUT) {
                                ++violations;
                                if (violations <= 10) {
                                    out << "violation: sliding point (";
                                    for (std::size_t d = 0; d < dims; ++d)
                                        out << (d ? ", " : "") << root[d];
                                    out << ") lies in an OUT box\n";
                                }
                            }
                        }
                    }
                    prev_t = t;
                    prev_f = f;
                }
            }
        }
    }

    out << "checked " << tested << " boundary points against " << paving_path << ": "
        << violations << " violation" << (violations == 1 ? "" : "s") << "\n";
    return violations == 0 ? 0 : 2;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Thick-set enclosure of sliding surfaces for uncertain switched systems"};
    app.require_subcommand(1);

    std::string input, out_path, svg_path, paving_path;
    double epsilon_override = 0.0;
    int workers = 1;
    std::uint64_t budget = PaveOptions{}.box_budget;
    int samples = 10000;
    int param_samples = 0;
    std::uint64_t seed = 1;

    auto* pave_cmd = app.add_subcommand("pave", "Pave the sliding enclosure of a system");
    pave_cmd->add_option("file", input, "system definition (.sys)")->required();
    pave_cmd->add_option("--out", out_path, "output paving JSON path")->required();
    pave_cmd->add_option("--svg", svg_path, "optional SVG rendering path");
    pave_cmd->add_option("--epsilon", epsilon_override, "override the file's epsilon")
        ->check(CLI::PositiveNumber);
    pave_cmd->add_option("--workers", workers, "concurrent classification workers")
        ->check(CLI::PositiveNumber);
    pave_cmd->add_option("--box-budget", budget, "worklist box budget");

    auto* lie_cmd = app.add_subcommand("lie", "Print the Lie derivatives of each region leaf");
    lie_cmd->add_option("file", input, "system definition (.sys)")->required();

    auto* check_cmd =
        app.add_subcommand("check", "Cross-check a paving against the thin point oracle");
    check_cmd->add_option("file", input, "system definition (.sys)")->required();
    check_cmd->add_option("--paving", paving_path, "paving JSON to validate")->required();
    check_cmd->add_option("--samples", samples, "number of probe segments")
        ->check(CLI::PositiveNumber);
    check_cmd->add_option("--param-samples", param_samples,
                          "extra random parameter instantiations (default: nominal only)");
    check_cmd->add_option("--seed", seed, "random seed");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 1;
    }

    try {
        if (pave_cmd->parsed())
            return run_pave(input, out_path, svg_path, epsilon_override, workers, budget, out);
        if (lie_cmd->parsed()) return run_lie(input, out);
        return run_check(input, paving_path, samples, param_samples, seed, out);
    } catch (const PaveResourceError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const ParseError& e) {
        err << input << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace thickpave::cli
