#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "affscat/checks.hpp"
#include "affscat/json_io.hpp"

using namespace affscat;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kBadInput = 2;

// "@path" reads a file, anything else is inline JSON
Json read_json_arg(const std::string& arg) {
    if (!arg.empty() && arg[0] == '@') {
        std::ifstream in(arg.substr(1));
        if (!in) throw Error(ErrorKind::InvalidInput, "cannot read " + arg.substr(1));
        std::stringstream ss;
        ss << in.rdbuf();
        return parse_json(ss.str());
    }
    return parse_json(arg);
}

void write_out(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + path);
    out << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Formal wall-crossing toolkit: factorization, scattering diagrams, tropical and affine checks"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string output;
    app.add_option("-o,--output", output, "Write the result here instead of stdout");

    // factorize
    auto* fac = app.add_subcommand("factorize", "Factorize F_inf o F_0 into walls of increasing slope");
    std::string f0_arg = "[1]", finf_arg = "[1]";
    long fac_k = 8;
    fac->add_option("--f0", f0_arg, "Wall at slope (1,0): JSON list [c1, c2, ...] of 1 + c1 z + ...");
    fac->add_option("--finf", finf_arg, "Wall at slope (0,1), same format");
    fac->add_option("-k,--series-order", fac_k, "Truncation degree")->check(CLI::PositiveNumber);

    // scatter
    auto* sc = app.add_subcommand("scatter", "Evolve lines from focus-focus points and attach walls");
    std::string points_arg, cutoff_arg = "6", window_arg, emit = "json";
    long sc_k = 6;
    bool verify = false;
    sc->add_option("--singular-points", points_arg,
                   "JSON list of [x, y] or {\"point\": [x, y], \"alpha\": [a, b]}; @file reads a file")
        ->required();
    sc->add_option("-C,--order-cutoff", cutoff_arg, "Order cutoff C (rational)");
    sc->add_option("-k,--series-order", sc_k, "Series order k")->check(CLI::PositiveNumber);
    sc->add_option("--window", window_arg, "xmin,ymin,xmax,ymax (rationals)");
    sc->add_option("--emit", emit, "json or svg");
    sc->add_flag("--verify", verify, "Check every vertex and 20 path pairs; exit 1 on failure");

    // gauss-bonnet
    auto* gb = app.add_subcommand("gauss-bonnet", "Sum i(w) over singularities against the Euler characteristic");
    std::vector<std::string> words;
    long genus = 0, count = 24;
    gb->add_option("--word", words, "Lifted word such as \"a3^-1 a2\" (repeatable); default: focus-focus");
    gb->add_option("--count", count, "Copies of the focus-focus word when no --word is given")
        ->check(CLI::NonNegativeNumber);
    gb->add_option("--genus", genus, "Genus of the base")->check(CLI::NonNegativeNumber);

    // tropical
    auto* tr = app.add_subcommand("tropical", "Val of a Laurent polynomial with t-adic coefficients");
    std::string poly_arg, at_arg, tr_emit = "json";
    tr->add_option("--poly", poly_arg,
                   "{\"variables\": n, \"terms\": [{\"exponent\": [...], \"coeff\": \"q\" | {\"t\": e, \"c\": \"q\"}}]}")
        ->required();
    tr->add_option("--at", at_arg, "Evaluate Val at this point (JSON list)");
    tr->add_option("--emit", tr_emit, "json or svg");

    // monodromy
    auto* mo = app.add_subcommand("monodromy", "Compose chart transitions along a loop");
    std::string transitions_arg;
    mo->add_option("--transitions", transitions_arg, "JSON list of matrices or {\"A\": matrix, \"b\": [x, y]}")
        ->required();

    // check-all
    auto* ca = app.add_subcommand("check-all", "Run the acceptance suites");
    std::uint64_t seed = 1;
    long ca_k = 6;
    bool ca_json = false;
    ca->add_option("--seed", seed, "Seed for the randomized suites");
    ca->add_option("-k,--series-order", ca_k, "Series order for the scattering and Poisson suites")
        ->check(CLI::PositiveNumber);
    ca->add_flag("--json", ca_json, "Print the report as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kBadInput;
    }

    try {
        if (fac->parsed()) {
            auto f0 = wall_from_json(read_json_arg(f0_arg)), finf = wall_from_json(read_json_arg(finf_arg));
            GradingPtr g = make_grading(Grading::standard(fac_k));
            auto sf = factorize(compose(slope_auto(Slope(0, 1), finf, g), slope_auto(Slope(1, 0), f0, g)));
            Json out;
            out["series_order"] = fac_k;
            out["factors"] = to_json(sf);
            write_out(dump(out), output);
            return kOk;
        }
        if (sc->parsed()) {
            auto pts = singular_points_from_json(read_json_arg(points_arg));
            std::optional<Window> window;
            if (!window_arg.empty()) {
                std::vector<Rational> w;
                std::stringstream ss(window_arg);
                for (std::string part; std::getline(ss, part, ',');) w.push_back(Rational::parse(part));
                if (w.size() != 4) throw Error(ErrorKind::InvalidInput, "--window needs four values");
                window = Window{w[0], w[1], w[2], w[3]};
            }
            Diagram d = build_diagram(pts, Rational::parse(cutoff_arg), sc_k, window);
            if (verify) {
                for (const auto& e : d.events) {
                    if (!event_consistent(d, e)) {
                        Json fail{{"failure", "vertex"}, {"point", to_json(e.point)}};
                        std::cerr << dump(fail);
                        return kCheckFailed;
                    }
                }
                for (const auto& pp : sample_event_path_pairs(d, 20, 1)) {
                    if (!(transport(d, pp.first, pp.frame) == transport(d, pp.second, pp.frame))) {
                        Json fail{{"failure", "transport"}, {"event", pp.event}};
                        std::cerr << dump(fail);
                        return kCheckFailed;
                    }
                }
            }
            write_out(export_diagram(d, emit), output);
            return kOk;
        }
        if (gb->parsed()) {
            std::vector<LiftedWord> ws;
            if (words.empty()) {
                ws.assign(static_cast<std::size_t>(count), focus_focus_lift());
            } else {
                for (const auto& w : words) ws.push_back(LiftedWord::parse(w));
            }
            auto r = gauss_bonnet_check(ws, genus);
            Json out{{"singularities", ws.size()},
                     {"sum", to_json(r.sum)},
                     {"euler_characteristic", to_json(r.euler_characteristic)},
                     {"passed", r.passed}};
            write_out(dump(out), output);
            return r.passed ? kOk : kCheckFailed;
        }
        if (tr->parsed()) {
            LaurentPoly f = laurent_from_json(read_json_arg(poly_arg));
            PLFunction u = val_function(f);
            if (tr_emit == "svg") {
                write_out(pl_function_svg(u), output);
                return kOk;
            }
            if (tr_emit != "json") throw Error(ErrorKind::UnsupportedFormat, "unknown format '" + tr_emit + "'");
            Json out = to_json(u);
            if (!at_arg.empty()) {
                RatPoint x;
                for (const auto& v : read_json_arg(at_arg)) x.push_back(rational_from_json(v));
                out["at"] = Json::array();
                for (const auto& v : x) out["at"].push_back(to_json(v));
                out["value"] = to_json(u(x));
            }
            write_out(dump(out), output);
            return kOk;
        }
        if (mo->parsed()) {
            Json ts = read_json_arg(transitions_arg);
            if (!ts.is_array()) throw Error(ErrorKind::InvalidInput, "transitions must be a list");
            LoopWord w;
            for (const auto& t : ts) w.push_back(affine_from_json(t));
            AffineTransform m = monodromy(w);
            Json out = to_json(m);
            auto n = unipotent_class(m.A);
            out["unipotent_class"] = n ? Json(*n) : Json(nullptr);
            write_out(dump(out), output);
            return kOk;
        }
        if (ca->parsed()) {
            auto results = checks::run_all(seed, ca_k);
            bool all = true;
            Json report{{"seed", seed}, {"series_order", ca_k}, {"results", Json::array()}};
            for (const auto& r : results) {
                all = all && r.passed;
                report["results"].push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
            }
            report["passed"] = all;
            if (ca_json) {
                write_out(dump(report), output);
            } else {
                std::ostringstream os;
                for (const auto& r : results) {
                    char buf[32];
                    std::snprintf(buf, sizeof buf, " [%.2fs]", r.seconds);
                    os << (r.passed ? "PASS " : "FAIL ") << r.id << " " << r.name << ": " << r.detail << buf << "\n";
                }
                os << (all ? "all suites passed" : "some suites failed") << "\n";
                write_out(os.str(), output);
                if (!all) std::cerr << dump(report);
            }
            return all ? kOk : kCheckFailed;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const Json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    }
    return kBadInput;
}
