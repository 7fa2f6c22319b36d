#include <amc/cli.hh>
#include <amc/colouring.hh>
#include <amc/digest.hh>
#include <amc/incidence.hh>
#include <amc/ramsey.hh>
#include <amc/render.hh>
#include <amc/search.hh>
#include <amc/structure.hh>
#include <amc/udg.hh>
#include <amc/window.hh>

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>

using namespace amc;

namespace
{
    auto read_file(const std::string & path) -> std::string
    {
        std::ifstream in{path, std::ios::binary};
        if (! in)
            throw Error{"cannot read '" + path + "'"};
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    }

    auto write_file(const std::string & path, const std::string & data) -> void
    {
        std::ofstream f{path, std::ios::binary};
        if (! f)
            throw Error{"cannot write '" + path + "'"};
        f << data;
        if (! f)
            throw Error{"failed writing '" + path + "'"};
    }

    /// Inline JSON, or the name of a file holding it.
    auto json_argument(const std::string & text) -> nlohmann::json
    {
        if (! text.empty() && (text.front() == '{' || text.front() == '['))
            return nlohmann::json::parse(text);
        return nlohmann::json::parse(read_file(text));
    }

    auto dump(const nlohmann::json & j) -> std::string
    {
        return j.dump(2) + "\n";
    }

    /// Memoizes colours and keeps them in a file under AMC_LAB_CACHE.
    class CachedColouring : public Colouring
    {
        private:
            ColouringPtr _inner;
            std::string _path;
            mutable std::mutex _mutex;
            mutable std::map<Point, int> _memo;
            mutable bool _dirty = false;

        public:
            CachedColouring(ColouringPtr inner, std::string path) :
                _inner(std::move(inner)),
                _path(std::move(path))
            {
                if (std::filesystem::exists(_path)) {
                    auto j = nlohmann::json::parse(read_file(_path));
                    if (j.value("colouring", nlohmann::json{}) == _inner->to_json())
                        for (auto & e : j.at("colours"))
                            _memo.emplace(Point::from_json(e.at(0)), e.at(1).get<int>());
                }
            }

            auto colour(const Point & p) const -> int override
            {
                {
                    std::lock_guard<std::mutex> guard{_mutex};
                    if (auto it = _memo.find(p) ; it != _memo.end())
                        return it->second;
                }
                int c = _inner->colour(p);
                std::lock_guard<std::mutex> guard{_mutex};
                _memo.emplace(p, c);
                _dirty = true;
                return c;
            }

            auto save() const -> void
            {
                std::lock_guard<std::mutex> guard{_mutex};
                if (! _dirty)
                    return;
                auto cs = nlohmann::json::array();
                for (auto & [p, c] : _memo)
                    cs.push_back({p.to_json(), c});
                write_file(_path, nlohmann::json{{"schema", "amc-lab/colour-cache/v1"}, {"colouring", _inner->to_json()}, {"colours", cs}}.dump());
            }

            auto palette_size() const -> int override { return _inner->palette_size(); }
            auto dimension() const -> std::size_t override { return _inner->dimension(); }
            auto domain() const -> DomainKind override { return _inner->domain(); }
            auto kind() const -> std::string override { return _inner->kind(); }
            auto to_json() const -> nlohmann::json override { return _inner->to_json(); }
    };

    struct Options
    {
        std::string colouring, window, pattern, points, out, manifest, lambda_max;
        unsigned den = 1, jobs = 1;
        int rotations = -1;
        bool no_quarter_turns = false, verify = false;
        int terms = 3;
        long t_max = 10;
        int radius = 2, rot_param = 5;
        int k = 2, l = 3, n = 2, N = 2;
        long nmax = 100;
        std::string proof_log, word, c_value = "1", bouquet, pencil, placement, lattice = "z2", graph, origin, lambda, size = "200x200";
        std::optional<int> want_colour;
        int colours = 2, density = 8, max_param = 10, limit = 10000;
        std::uint64_t seed = 1;
        double angle_lo = 0, angle_hi = 0;
        bool bichromatic_origin = false;
    };

    struct Context
    {
        Options o;
        std::ostream & out;
        std::ostream & err;
        std::map<std::string, std::string> input_digests;

        auto colouring() -> ColouringPtr
        {
            if (o.colouring.empty())
                throw Error{"--colouring is required"};
            auto c = parse_colouring(o.colouring);
            input_digests["colouring"] = json_digest(c->to_json());
            return c;
        }

        auto window() -> Window
        {
            if (o.window.empty())
                throw Error{"--window is required"};
            return Window::parse(o.window, o.den);
        }

        auto emit(const nlohmann::json & j) -> void
        {
            if (o.out.empty())
                out << dump(j);
            else
                write_file(o.out, dump(j));
        }

        auto finish_witness(const Witness & w, const Colouring & colouring) -> int
        {
            out << to_string(w.kind);
            if (w.transform)
                out << " scale " << to_string(w.transform->scale());
            if (w.kind == WitnessKind::Exhausted && w.extra.contains("candidates"))
                out << " after " << w.extra.at("candidates").dump() << " candidates";
            out << "\n";
            for (auto & e : w.evidence)
                out << "  " << to_string(e.point) << " colour " << e.colour << "\n";
            if (! o.out.empty())
                write_file(o.out, dump(w.to_json()));
            if (o.verify) {
                auto back = Witness::from_json(w.to_json());
                auto report = verify_witness(back, colouring);
                out << "verify: " << (report.ok ? "ok" : "FAILED") << "\n";
                for (auto & f : report.problems)
                    out << "  " << f << "\n";
                if (! report.ok)
                    return cli::exit_error;
            }
            return w.found() ? cli::exit_found : cli::exit_exhausted;
        }
    };

    auto parse_size(const std::string & s) -> std::pair<int, int>
    {
        auto x = s.find('x');
        if (x == std::string::npos)
            throw Error{"size must look like WIDTHxHEIGHT"};
        return {std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1))};
    }

    auto graph_argument(const std::string & text) -> UnitDistanceGraph
    {
        if (text == "triangle")
            return unit_triangle_graph();
        if (text == "moser")
            return moser_spindle_graph();
        return UnitDistanceGraph::from_json(json_argument(text));
    }

    auto lattice_argument(const std::string & text) -> Lattice
    {
        if (text == "z2")
            return Lattice::integer_lattice(2);
        if (text == "z3")
            return Lattice::integer_lattice(3);
        return Lattice::from_json(json_argument(text));
    }

    auto integer_range(const Window & w) -> std::pair<long, long>
    {
        if (w.dimension() != 1 || ! is_integer(w.lower()[0]) || ! is_integer(w.upper()[0]))
            throw Error{"an integer interval lo:hi is needed"};
        return {w.lower()[0].get_num().get_si(), w.upper()[0].get_num().get_si()};
    }

    auto cmd_colouring_sample(Context & c) -> int
    {
        auto colouring = c.colouring();
        auto window = c.window();
        ColourTable table{window, *colouring, c.o.jobs};
        std::ostringstream lines;
        lines << nlohmann::json{{"schema", "amc-lab/sample/v1"}, {"colouring", colouring->to_json()}, {"window", window.to_json()}}.dump()
            << "\n";
        long written = 0;
        for (auto v : table.valid_points()) {
            if (written++ == c.o.limit)
                break;
            lines << nlohmann::json{{"point", window.point_at(table.coords_of(v)).to_json()}, {"colour", table.at_linear(v)}}.dump() << "\n";
        }
        if (c.o.out.empty())
            c.out << lines.str();
        else
            write_file(c.o.out, lines.str());
        return cli::exit_found;
    }

    auto cmd_colouring_render(Context & c) -> int
    {
        auto colouring = c.colouring();
        auto window = Window::parse(c.o.window, 1);
        auto [w, h] = parse_size(c.o.size);
        auto svg = render_colouring_svg(*colouring, window.lower(), window.upper(), w, h);
        if (c.o.out.empty())
            c.out << svg;
        else {
            write_file(c.o.out, svg);
            c.out << "wrote " << c.o.out << "\n";
        }
        return cli::exit_found;
    }

    auto cmd_colouring_certify(Context & c) -> int
    {
        auto colouring = c.colouring();
        auto cert = certify_shell_ap_free(*colouring);
        c.emit(cert.to_json());
        return cert.ap_free ? cli::exit_found : cli::exit_exhausted;
    }

    auto cmd_search_am(Context & c) -> int
    {
        auto colouring = c.colouring();
        auto window = c.window();
        if (c.o.pattern.empty() || c.o.lambda_max.empty())
            throw Error{"--pattern and --lambda-max are required"};
        auto pattern = parse_pattern(c.o.pattern);
        auto lambda_max = parse_rational(c.o.lambda_max);
        Witness w = c.o.rotations >= 0
            ? search_am_similar_2d(colouring, pattern, window, lambda_max, c.o.rotations, ! c.o.no_quarter_turns, c.o.jobs)
            : search_am_homothet(colouring, pattern, window, lambda_max, c.o.jobs);
        return c.finish_witness(w, *colouring);
    }

    auto cmd_search_ap(Context & c) -> int
    {
        auto colouring = c.colouring();
        auto w = probe_mono_ap(colouring, c.window(), c.o.terms, c.o.t_max, c.o.jobs);
        return c.finish_witness(w, *colouring);
    }

    auto cmd_search_gallai(Context & c) -> int
    {
        auto colouring = c.colouring();
        if (c.o.points.empty() || c.o.lambda_max.empty())
            throw Error{"--points and --lambda-max are required"};
        auto w = search_mono_homothet(colouring, parse_point_list(c.o.points), c.window(), std::stol(c.o.lambda_max), c.o.jobs);
        return c.finish_witness(w, *colouring);
    }

    auto cmd_search_grid(Context & c) -> int
    {
        auto colouring = c.colouring();
        if (c.o.pattern.empty() || c.o.lambda_max.empty())
            throw Error{"--pattern and --lambda-max are required"};
        auto w = grid_expand(colouring, parse_pattern(c.o.pattern), c.window(), c.o.radius, std::stol(c.o.lambda_max),
                c.o.rot_param, c.o.jobs);
        return c.finish_witness(w, *colouring);
    }

    auto cmd_ramsey_vdw(Context & c) -> int
    {
        auto r = vdw_number(c.o.k, c.o.l, c.o.nmax, c.o.jobs, c.o.proof_log);
        if (r.decided)
            c.out << r.value << "\n";
        else
            c.out << "> " << r.n_max << "\n";
        std::string w;
        for (auto col : r.witness)
            w += char('0' + col);
        c.out << "witness " << w << " (length " << r.witness.size() << "), " << r.nodes << " nodes, proof " << r.proof_digest << "\n";
        if (! c.o.out.empty())
            write_file(c.o.out, dump(nlohmann::json{{"schema", "amc-lab/certificate/v1"}, {"kind", "vdw"}, {"result", r.to_json()}}));
        return r.decided ? cli::exit_found : cli::exit_exhausted;
    }

    auto cmd_ramsey_hj(Context & c) -> int
    {
        int n = c.o.n, N = c.o.N;
        std::function<auto (const std::vector<int> &) -> int> colour;
        std::vector<int> table;
        HJCube probe{n, N, [] (const std::vector<int> &) { return 0; }};
        if (! c.o.word.empty()) {
            if (c.o.word.size() != probe.point_count())
                throw Error{"--word must give one colour per cube point (" + std::to_string(probe.point_count()) + ")"};
            auto e = ExplicitColouring::from_word(c.o.word, 0);
            for (std::size_t i = 0 ; i < c.o.word.size() ; ++i)
                table.push_back(e.colour(Point{{Rational{long(i)}}}));
        }
        else {
            std::mt19937_64 rng{c.o.seed};
            std::uniform_int_distribution<int> pick{0, c.o.colours - 1};
            for (std::uint64_t i = 0 ; i < probe.point_count() ; ++i)
                table.push_back(pick(rng));
        }
        HJCube cube{n, N, [&] (const std::vector<int> & x) {
            std::uint64_t idx = 0;
            for (auto v : x)
                idx = idx * std::uint64_t(n) + std::uint64_t(v - 1);
            return table[idx];
        }};
        auto line = hj_find_line(cube, c.o.jobs);
        nlohmann::json j = {{"schema", "amc-lab/certificate/v1"}, {"kind", "hj"}, {"n", n}, {"N", N}};
        if (line) {
            j["line"] = line->to_json();
            j["points"] = line->points(n);
            c.out << "line";
            for (auto v : line->pattern)
                c.out << " " << (v == 0 ? std::string{"*"} : std::to_string(v));
            c.out << "\n";
        }
        else
            c.out << "none\n";
        if (! c.o.out.empty())
            write_file(c.o.out, dump(j));
        return line ? cli::exit_found : cli::exit_exhausted;
    }

    auto cmd_ramsey_gallai(Context & c) -> int
    {
        ColouringPtr colouring = c.colouring();
        std::shared_ptr<CachedColouring> cached;
        if (const char * dir = std::getenv("AMC_LAB_CACHE") ; dir && *dir) {
            std::filesystem::create_directories(dir);
            auto path = (std::filesystem::path{dir} / ("pullback-" + json_digest(colouring->to_json()).substr(0, 16) + ".json")).string();
            cached = std::make_shared<CachedColouring>(colouring, path);
            colouring = cached;
        }
        if (c.o.points.empty())
            throw Error{"--points is required"};
        std::optional<Window> window;
        if (! c.o.window.empty())
            window = c.window();
        auto w = gallai_via_hj(colouring, parse_point_list(c.o.points), c.o.N, window, c.o.jobs);
        if (cached)
            cached->save();
        return c.finish_witness(w, *colouring);
    }

    auto cmd_ramsey_common(Context & c) -> int
    {
        auto colouring = c.colouring();
        auto [lo, hi] = integer_range(Window::parse(c.o.window, 1));
        auto r = vdw_common_difference(*colouring, lo, hi, c.o.l);
        c.out << "difference " << r.t << " colour " << r.colour << ", " << r.starts.size() << " progressions\n";
        if (! c.o.out.empty())
            write_file(c.o.out, dump({{"t", r.t}, {"colour", r.colour}, {"starts", r.starts}}));
        return cli::exit_found;
    }

    auto cmd_structure_analyze(Context & c) -> int
    {
        auto colouring = c.colouring();
        auto [lo, hi] = integer_range(Window::parse(c.o.window, 1));
        auto r = analyze_z_colouring(colouring, lo, hi, c.o.jobs);
        if (r.am_witness)
            c.out << "almost-monochromatic homothet found\n";
        else if (r.partition) {
            c.out << "progression partition, period " << r.partition->period.get_str() << "\n";
            for (auto & cl : r.partition->classes)
                c.out << "  " << cl.residue.get_str() << " mod " << cl.difference.get_str() << " colour " << cl.colour << "\n";
        }
        else
            c.out << "inconclusive: " << r.inconclusive << "\n";
        if (! c.o.out.empty())
            write_file(c.o.out, dump(r.to_json()));
        return r.inconclusive.empty() ? cli::exit_found : cli::exit_exhausted;
    }

    auto cmd_structure_egyptian(Context & c) -> int
    {
        Rational value = parse_rational(c.o.c_value);
        Integer bound = egyptian_bound(c.o.k, value);
        c.out << "bound " << bound.get_str() << "\n";
        nlohmann::json j = {{"k", c.o.k}, {"c", to_string(value)}, {"bound", bound.get_str()}};
        if (value == 1 && c.o.k <= 6) {
            auto sols = enumerate_unit_fraction_solutions(c.o.k, c.o.jobs);
            Integer mx{0};
            auto js = nlohmann::json::array();
            for (auto & s : sols) {
                mx = std::max(mx, s.back());
                auto row = nlohmann::json::array();
                for (auto & x : s)
                    row.push_back(x.get_str());
                js.push_back(row);
            }
            c.out << sols.size() << " solutions, largest denominator " << mx.get_str() << "\n";
            j["solutions"] = js;
        }
        if (! c.o.out.empty())
            write_file(c.o.out, dump(j));
        return cli::exit_found;
    }

    auto cmd_geometry_place(Context & c) -> int
    {
        auto bouquet = Bouquet::from_json(json_argument(c.o.bouquet));
        auto p = place_scaled_copy(bouquet, parse_rational(c.o.lambda));
        auto pts = nlohmann::json::array();
        for (auto & q : p.points)
            pts.push_back({double(q.x), double(q.y)});
        nlohmann::json j = {{"alpha", double(p.alpha)}, {"points", pts}, {"max_circle_error", double(p.max_circle_error)},
            {"max_congruence_error", double(p.max_congruence_error)}};
        if (p.exact_points) {
            auto ex = nlohmann::json::array();
            for (auto & q : *p.exact_points)
                ex.push_back(q.to_json());
            j["exact_points"] = ex;
        }
        c.out << "alpha " << double(p.alpha) << ", circle error " << double(p.max_circle_error) << "\n";
        if (! c.o.out.empty())
            write_file(c.o.out, dump(j));
        return cli::exit_found;
    }

    auto cmd_geometry_smiling(Context & c) -> int
    {
        auto colouring = c.colouring();
        SimilarityMap placement = c.o.placement.empty() ? SimilarityMap::identity(2) : SimilarityMap::from_json(json_argument(c.o.placement));
        std::optional<SmilingWitness> w;
        if (! c.o.bouquet.empty())
            w = check_smiling(*colouring, Bouquet::from_json(json_argument(c.o.bouquet)), placement, c.o.density, c.o.want_colour);
        else if (! c.o.pencil.empty())
            w = check_smiling(*colouring, Pencil::from_json(json_argument(c.o.pencil)), placement, c.o.density, c.o.want_colour);
        else
            throw Error{"--bouquet or --pencil is required"};
        if (! w) {
            c.out << "not found at density " << c.o.density << "\n";
            return cli::exit_exhausted;
        }
        c.out << "smiling: colour " << w->colour << " on every component, origin colour " << w->origin_colour << "\n";
        if (! c.o.out.empty())
            write_file(c.o.out, dump(w->to_json()));
        return cli::exit_found;
    }

    auto cmd_geometry_rotatable(Context & c) -> int
    {
        auto lattice = lattice_argument(c.o.lattice);
        auto w = find_rotatability_witness(lattice, c.o.angle_lo, c.o.angle_hi, c.o.max_param);
        if (! w) {
            c.out << "none\n";
            return cli::exit_exhausted;
        }
        c.out << "rotation " << w->rotation.rotation().to_json().dump() << " lambda " << to_string(w->lambda) << "\n";
        if (! c.o.out.empty())
            write_file(c.o.out, dump({{"rotation", w->rotation.to_json()}, {"lambda", to_string(w->lambda)},
                {"angle", {w->angle.lo, w->angle.hi}}}));
        return cli::exit_found;
    }

    auto cmd_geometry_reach(Context & c) -> int
    {
        auto r = pencil_reach(Pencil::from_json(json_argument(c.o.pencil)));
        c.out << "spanned angle " << r.spanned_angle << ", epsilon " << r.epsilon << "\n";
        return cli::exit_found;
    }

    auto cmd_udg_solve(Context & c) -> int
    {
        auto graph = graph_argument(c.o.graph);
        if (! c.o.origin.empty())
            graph = graph.with_origin(graph.index_of(c.o.origin));
        nlohmann::json j = {{"schema", "amc-lab/certificate/v1"}, {"kind", "udg"}, {"k", c.o.k}};
        bool found;
        if (c.o.bichromatic_origin) {
            auto r = solve_bichromatic_origin(graph, c.o.k, c.o.jobs);
            found = r.colouring.has_value();
            j["bichromatic_origin"] = true;
            j["trace"] = r.trace.to_json();
            j["pairs_tried"] = r.pairs_tried;
            if (found)
                j["colouring"] = r.colouring->to_json(graph);
            c.out << (found ? "found" : "none") << " (" << r.trace.nodes << " nodes, trace " << r.trace.digest << ")\n";
        }
        else {
            auto r = solve_proper(graph, c.o.k);
            found = r.colouring.has_value();
            j["trace"] = r.trace.to_json();
            if (found) {
                nlohmann::json cs = nlohmann::json::object();
                for (std::size_t v = 0 ; v < graph.size() ; ++v)
                    cs[graph.vertices()[v].id] = (*r.colouring)[v];
                j["colouring"] = cs;
            }
            c.out << (found ? "found" : "none") << " (" << r.trace.nodes << " nodes, trace " << r.trace.digest << ")\n";
        }
        if (! c.o.out.empty())
            write_file(c.o.out, dump(j));
        return found ? cli::exit_found : cli::exit_exhausted;
    }

    auto cmd_udg_validate(Context & c) -> int
    {
        auto graph = graph_argument(c.o.graph);
        auto r = validate_unit_distances(graph);
        c.out << r.exact_edges << " exact edges, " << r.numeric_edges << " numeric edges, " << r.violations.size() << " violations\n";
        if (! c.o.out.empty())
            write_file(c.o.out, dump(r.to_json(graph)));
        return r.ok() ? cli::exit_found : cli::exit_exhausted;
    }

    auto without_manifest(const std::vector<std::string> & args) -> std::vector<std::string>
    {
        std::vector<std::string> kept;
        for (std::size_t i = 0 ; i < args.size() ; ++i) {
            if (args[i] == "--manifest") {
                ++i;
                continue;
            }
            if (args[i].rfind("--manifest=", 0) == 0)
                continue;
            kept.push_back(args[i]);
        }
        return kept;
    }

    auto cmd_replay(const std::string & manifest_path, const std::string & out_override, std::ostream & out, std::ostream & err) -> int
    {
        auto m = nlohmann::json::parse(read_file(manifest_path));
        if (m.value("schema", "") != "amc-lab/manifest/v1")
            throw Error{"not a run manifest"};
        auto args = m.at("arguments").get<std::vector<std::string>>();
        std::string recorded = m.value("witness_path", "");
        std::string target = out_override.empty() ? recorded + ".replay" : out_override;
        if (recorded.empty())
            throw Error{"manifest records no output file to compare"};
        for (std::size_t i = 0 ; i + 1 < args.size() ; ++i)
            if (args[i] == "--out")
                args[i + 1] = target;
        std::ostringstream quiet;
        int code = cli::run(args, quiet, err);
        if (code != m.at("exit_code").get<int>()) {
            out << "exit code differs: " << code << "\n";
            return cli::exit_error;
        }
        bool same = read_file(recorded) == read_file(target);
        out << (same ? "identical" : "differs") << "\n";
        return same ? cli::exit_found : cli::exit_error;
    }
}

auto amc::cli::run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err) -> int
{
    CLI::App app{"Almost-monochromatic pattern lab", "amc-lab"};
    app.require_subcommand(1);
    Context ctx{Options{}, out, err, {}};
    auto & o = ctx.o;
    std::function<int (Context &)> action;
    std::string subcommand;
    std::string replay_manifest, replay_out;

    auto common = [&] (CLI::App * s) {
        s->add_option("--out", o.out, "Write the JSON result here");
        s->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::Range(1u, 256u));
        s->add_option("--manifest", o.manifest, "Write a run manifest here");
    };
    auto leaf = [&] (CLI::App * group, const std::string & name, const std::string & help, std::function<int (Context &)> f) {
        auto s = group->add_subcommand(name, help);
        common(s);
        s->callback([&, f, name, group] {
            action = f;
            subcommand = group->get_name() + " " + name;
        });
        return s;
    };

    auto colouring_group = app.add_subcommand("colouring", "Sample, render or certify colourings");
    colouring_group->require_subcommand(1);
    {
        auto s = leaf(colouring_group, "sample", "Colours of the window's points", cmd_colouring_sample);
        s->add_option("--colouring", o.colouring)->required();
        s->add_option("--window", o.window)->required();
        s->add_option("--den", o.den);
        s->add_option("--limit", o.limit);
        s = leaf(colouring_group, "render", "SVG picture of a planar colouring", cmd_colouring_render);
        s->add_option("--colouring", o.colouring)->required();
        s->add_option("--window", o.window)->required();
        s->add_option("--size", o.size);
        s = leaf(colouring_group, "certify", "Structural AP-freeness certificate", cmd_colouring_certify);
        s->add_option("--colouring", o.colouring)->required();
    }

    auto search_group = app.add_subcommand("search", "Witness searches over a window");
    search_group->require_subcommand(1);
    {
        auto s = leaf(search_group, "am", "Almost-monochromatic homothet or similar copy", cmd_search_am);
        s->add_option("--colouring", o.colouring)->required();
        s->add_option("--pattern", o.pattern, "Points and distinguished point, e.g. 1,2,3@2")->required();
        s->add_option("--window", o.window)->required();
        s->add_option("--den", o.den, "Denominator bound for rational windows");
        s->add_option("--lambda-max", o.lambda_max)->required();
        s->add_option("--rotations", o.rotations, "Also try rational rotations up to this parameter");
        s->add_flag("--no-quarter-turns", o.no_quarter_turns);
        s->add_flag("--verify", o.verify);
        s = leaf(search_group, "ap", "Monochromatic arithmetic progression", cmd_search_ap);
        s->add_option("--colouring", o.colouring)->required();
        s->add_option("--window", o.window)->required();
        s->add_option("--den", o.den);
        s->add_option("--terms", o.terms);
        s->add_option("--t-max", o.t_max);
        s->add_flag("--verify", o.verify);
        s = leaf(search_group, "gallai", "Monochromatic homothet with integer scale", cmd_search_gallai);
        s->add_option("--colouring", o.colouring)->required();
        s->add_option("--points", o.points)->required();
        s->add_option("--window", o.window)->required();
        s->add_option("--den", o.den);
        s->add_option("--lambda-max", o.lambda_max)->required();
        s->add_flag("--verify", o.verify);
        s = leaf(search_group, "grid", "Expand a monochromatic ball along its lattice", cmd_search_grid);
        s->add_option("--colouring", o.colouring)->required();
        s->add_option("--pattern", o.pattern)->required();
        s->add_option("--window", o.window)->required();
        s->add_option("--radius", o.radius);
        s->add_option("--lambda-max", o.lambda_max)->required();
        s->add_option("--rot-param", o.rot_param);
        s->add_flag("--verify", o.verify);
    }

    auto ramsey_group = app.add_subcommand("ramsey", "Van der Waerden and Hales-Jewett engines");
    ramsey_group->require_subcommand(1);
    {
        auto s = leaf(ramsey_group, "vdw", "Van der Waerden number by backtracking", cmd_ramsey_vdw);
        s->add_option("--k", o.k)->required();
        s->add_option("--l", o.l)->required();
        s->add_option("--nmax", o.nmax);
        s->add_option("--proof-log", o.proof_log, "Write the gzip-compressed refutation log here");
        s = leaf(ramsey_group, "hj", "Monochromatic combinatorial line", cmd_ramsey_hj);
        s->add_option("--n", o.n)->required();
        s->add_option("--N", o.N)->required();
        s->add_option("--word", o.word, "Cube colouring in lexicographic order");
        s->add_option("--colours", o.colours);
        s->add_option("--seed", o.seed);
        s = leaf(ramsey_group, "gallai", "Monochromatic homothet through a Hales-Jewett line", cmd_ramsey_gallai);
        s->add_option("--colouring", o.colouring)->required();
        s->add_option("--points,--pattern", o.points)->required();
        s->add_option("--N", o.N)->required();
        s->add_option("--window", o.window);
        s->add_flag("--verify", o.verify);
        s = leaf(ramsey_group, "common", "Most frequent monochromatic AP difference", cmd_ramsey_common);
        s->add_option("--colouring", o.colouring)->required();
        s->add_option("--window", o.window)->required();
        s->add_option("--l", o.l);
    }

    auto structure_group = app.add_subcommand("structure", "Colourings of the integers");
    structure_group->require_subcommand(1);
    {
        auto s = leaf(structure_group, "analyze", "Progression partition or almost-monochromatic triple", cmd_structure_analyze);
        s->add_option("--colouring", o.colouring)->required();
        s->add_option("--window", o.window)->required();
        s = leaf(structure_group, "egyptian", "Unit fraction bound and solutions", cmd_structure_egyptian);
        s->add_option("--k", o.k)->required();
        s->add_option("--c", o.c_value);
    }

    auto geometry_group = app.add_subcommand("geometry", "Bouquets, pencils and lattices");
    geometry_group->require_subcommand(1);
    {
        auto s = leaf(geometry_group, "place", "Scaled copy of the centres on the circles", cmd_geometry_place);
        s->add_option("--bouquet", o.bouquet)->required();
        s->add_option("--lambda", o.lambda)->required();
        s = leaf(geometry_group, "smiling", "Colour met by every circle or line but not the origin", cmd_geometry_smiling);
        s->add_option("--colouring", o.colouring)->required();
        s->add_option("--bouquet", o.bouquet);
        s->add_option("--pencil", o.pencil);
        s->add_option("--placement", o.placement);
        s->add_option("--density", o.density);
        s->add_option("--colour", o.want_colour);
        s = leaf(geometry_group, "rotatable", "Rotation in an angle interval mapping a scaled lattice into itself", cmd_geometry_rotatable);
        s->add_option("--lattice", o.lattice);
        s->add_option("--angle-lo", o.angle_lo)->required();
        s->add_option("--angle-hi", o.angle_hi)->required();
        s->add_option("--max-param", o.max_param);
        s = leaf(geometry_group, "reach", "Distance from a circle at which a pencil still meets it", cmd_geometry_reach);
        s->add_option("--pencil", o.pencil)->required();
    }

    auto udg_group = app.add_subcommand("udg", "Unit-distance graphs");
    udg_group->require_subcommand(1);
    {
        auto s = leaf(udg_group, "solve", "Proper colouring, optionally with a bichromatic origin", cmd_udg_solve);
        s->add_option("--graph", o.graph, "Graph JSON, or triangle / moser")->required();
        s->add_option("--k", o.k)->required();
        s->add_flag("--bichromatic-origin", o.bichromatic_origin);
        s->add_option("--origin", o.origin);
        s = leaf(udg_group, "validate", "Check that every edge has unit length", cmd_udg_validate);
        s->add_option("--graph", o.graph)->required();
    }

    auto replay = app.add_subcommand("replay", "Rerun a manifest and compare the output");
    replay->add_option("--manifest", replay_manifest)->required();
    replay->add_option("--out", replay_out);
    replay->callback([&] { subcommand = "replay"; });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    }
    catch (const CLI::ParseError & e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : exit_error;
    }

    try {
        if (subcommand == "replay")
            return cmd_replay(replay_manifest, replay_out, out, err);
        auto start = std::chrono::steady_clock::now();
        int code = action(ctx);
        auto seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (! o.manifest.empty()) {
            if (! o.out.empty() && std::filesystem::exists(o.out))
                ctx.input_digests["output"] = sha256_hex(read_file(o.out));
            write_file(o.manifest, dump({
                {"schema", "amc-lab/manifest/v1"},
                {"subcommand", subcommand},
                {"arguments", without_manifest(args)},
                {"input_digests", ctx.input_digests},
                {"witness_path", o.out},
                {"wall_time_seconds", seconds},
                {"jobs", o.jobs},
                {"exit_code", code}
            }));
        }
        return code;
    }
    catch (const nlohmann::json::exception & e) {
        err << "error: malformed JSON: " << e.what() << "\n";
        return exit_error;
    }
    catch (const std::exception & e) {
        err << "error: " << e.what() << "\n";
        return exit_error;
    }
}
