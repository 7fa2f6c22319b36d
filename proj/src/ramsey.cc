#include <amc/ramsey.hh>
#include <amc/digest.hh>
#include <amc/parallel.hh>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

using namespace amc;

namespace
{
    const std::size_t max_log_entries = 2'000'000;

    /// Colour of the AP ending at position m (0-based) with difference d is
    /// monochromatic?
    auto ap_ending_at(const std::vector<int> & c, std::size_t m, int l) -> std::optional<std::size_t>
    {
        for (std::size_t d = 1 ; d * std::size_t(l - 1) <= m ; ++d) {
            bool mono = true;
            for (int i = 1 ; i < l && mono ; ++i)
                mono = c[m - i * d] == c[m];
            if (mono)
                return d;
        }
        return std::nullopt;
    }

    auto colour_char(int c) -> char
    {
        return c < 10 ? char('0' + c) : char('a' + c - 10);
    }

    auto prefix_string(const std::vector<int> & c, std::size_t len) -> std::string
    {
        std::string s;
        for (std::size_t i = 0 ; i < len ; ++i)
            s += colour_char(c[i]);
        return s;
    }

    struct SubtreeResult
    {
        std::size_t max_depth = 0;
        std::vector<int> deepest;
        bool full = false;
        std::uint64_t nodes = 0;
        std::vector<std::pair<std::string, std::string>> log;
        bool truncated = false;
    };

    struct Backtracker
    {
        int k, l;
        std::size_t n_max;
        std::vector<int> c;
        SubtreeResult out;

        /// Explores below an AP-free prefix of the given length; returns true
        /// once a colouring of length n_max is found.
        auto explore(std::size_t len, int max_colour) -> bool
        {
            ++out.nodes;
            if (len > out.max_depth) {
                out.max_depth = len;
                out.deepest.assign(c.begin(), c.begin() + len);
            }
            if (len == n_max) {
                out.full = true;
                return true;
            }

            std::string refutations;
            bool any_live = false;
            for (int colour = 0 ; colour < k && colour <= max_colour + 1 ; ++colour) {
                c[len] = colour;
                if (auto d = ap_ending_at(c, len, l)) {
                    refutations += "," + std::to_string(colour) + ":" + std::to_string(len + 1 - (l - 1) * *d) + ":" + std::to_string(*d);
                    continue;
                }
                any_live = true;
                if (explore(len + 1, std::max(max_colour, colour)))
                    return true;
            }
            if (! any_live) {
                if (out.log.size() < max_log_entries)
                    out.log.emplace_back(prefix_string(c, len), refutations.substr(1));
                else
                    out.truncated = true;
            }
            return false;
        }
    };

    auto choose_split_depth(int k, std::size_t n_max) -> std::size_t
    {
        std::size_t p = 1;
        while (p < n_max && std::pow(double(k), double(p - 1)) < 512)
            ++p;
        return p;
    }

    /// AP-free prefixes of exactly the split length, in lexicographic order;
    /// dead ends above that depth are recorded in phase.
    auto collect_prefixes(int k, int l, std::size_t depth, SubtreeResult & phase) -> std::vector<std::vector<int>>
    {
        std::vector<std::vector<int>> prefixes;
        std::vector<int> c(depth, 0);
        std::function<void (std::size_t, int)> walk = [&] (std::size_t len, int max_colour) {
            if (len == depth) {
                prefixes.emplace_back(c.begin(), c.begin() + len);
                return;
            }
            ++phase.nodes;
            if (len > phase.max_depth) {
                phase.max_depth = len;
                phase.deepest.assign(c.begin(), c.begin() + len);
            }
            std::string refutations;
            bool any_live = false;
            for (int colour = 0 ; colour < k && colour <= max_colour + 1 ; ++colour) {
                c[len] = colour;
                if (auto d = ap_ending_at(c, len, l)) {
                    refutations += "," + std::to_string(colour) + ":" + std::to_string(len + 1 - (l - 1) * *d) + ":" + std::to_string(*d);
                    continue;
                }
                any_live = true;
                walk(len + 1, std::max(max_colour, colour));
            }
            if (! any_live)
                phase.log.emplace_back(prefix_string(c, len), refutations.substr(1));
        };
        walk(0, -1);
        return prefixes;
    }

    auto log_header(int k, int l, long n_max) -> std::string
    {
        return nlohmann::json{{"format", "vdw-refutations"}, {"k", k}, {"l", l}, {"n_max", n_max}}.dump() + "\n";
    }
}

auto VdwResult::to_json() const -> nlohmann::json
{
    std::string w;
    for (auto c : witness)
        w += colour_char(c);
    nlohmann::json j = {
        {"k", k},
        {"l", l},
        {"n_max", n_max},
        {"decided", decided},
        {"witness", w},
        {"witness_length", witness.size()},
        {"nodes", nodes},
        {"refuted_prefixes", refuted_prefixes},
        {"log_truncated", log_truncated},
        {"proof_digest", proof_digest}
    };
    if (decided)
        j["value"] = value;
    else
        j["lower_bound"] = n_max + 1;
    return j;
}

auto amc::has_mono_ap(const std::vector<int> & colours, int l) -> bool
{
    for (std::size_t m = 0 ; m < colours.size() ; ++m)
        if (ap_ending_at(colours, m, l))
            return true;
    return false;
}

auto amc::vdw_number(int k, int l, long n_max, unsigned jobs, const std::string & proof_log_path) -> VdwResult
{
    if (k < 2 || l < 2)
        throw Error{"van der Waerden search needs k >= 2 and l >= 2"};
    if (n_max < 1 || n_max > 100000)
        throw Error{"n_max must be between 1 and 100000"};
    if (k > 36)
        throw Error{"at most 36 colours are supported"};

    std::size_t limit = std::size_t(n_max);
    std::size_t depth = choose_split_depth(k, limit);

    SubtreeResult phase;
    auto prefixes = collect_prefixes(k, l, depth, phase);

    std::vector<SubtreeResult> results(prefixes.size());
    std::atomic<std::size_t> best{prefixes.size()};
    parallel_indices(prefixes.size(), jobs, [&] (std::size_t j) {
        if (j > best.load())
            return;
        Backtracker b{k, l, limit, std::vector<int>(limit + 1, 0), {}};
        std::copy(prefixes[j].begin(), prefixes[j].end(), b.c.begin());
        int max_colour = *std::max_element(prefixes[j].begin(), prefixes[j].end());
        b.explore(prefixes[j].size(), max_colour);
        results[j] = std::move(b.out);
        if (results[j].full) {
            std::size_t cur = best.load();
            while (j < cur && ! best.compare_exchange_weak(cur, j))
                ;
        }
    });

    VdwResult r;
    r.k = k;
    r.l = l;
    r.n_max = n_max;

    std::size_t used = std::min(best.load() + 1, prefixes.size());
    std::vector<std::pair<std::string, std::string>> log = std::move(phase.log);
    std::size_t max_depth = phase.max_depth;
    r.nodes = phase.nodes;
    for (std::size_t j = 0 ; j < used ; ++j) {
        r.nodes += results[j].nodes;
        max_depth = std::max(max_depth, results[j].max_depth);
        r.log_truncated = r.log_truncated || results[j].truncated;
        for (auto & e : results[j].log)
            log.push_back(std::move(e));
    }
    std::sort(log.begin(), log.end());
    if (log.size() > max_log_entries) {
        log.resize(max_log_entries);
        r.log_truncated = true;
    }

    if (best.load() < prefixes.size()) {
        r.decided = false;
        r.value = n_max;
        r.witness = results[best.load()].deepest;
    }
    else if (prefixes.empty() && phase.max_depth < limit) {
        r.decided = true;
        r.value = long(max_depth) + 1;
        r.witness = phase.deepest;
    }
    else {
        // deepest colourings in DFS order are lexicographically ordered
        std::optional<std::vector<int>> first;
        if (phase.max_depth == max_depth)
            first = phase.deepest;
        for (std::size_t j = 0 ; j < used ; ++j)
            if (results[j].max_depth == max_depth && (! first || results[j].deepest < *first))
                first = results[j].deepest;
        r.decided = max_depth < limit;
        r.value = r.decided ? long(max_depth) + 1 : n_max;
        r.witness = *first;
    }
    r.refuted_prefixes = log.size();

    std::string text = log_header(k, l, n_max);
    for (auto & [prefix, refutations] : log)
        text += prefix + ";" + refutations + "\n";
    text += nlohmann::json{{"decided", r.decided}, {"max_depth", max_depth}, {"truncated", r.log_truncated}}.dump() + "\n";
    r.proof_digest = sha256_hex(text);
    if (! proof_log_path.empty())
        write_gz(proof_log_path, text);
    return r;
}

auto amc::check_vdw_proof_log(const std::string & path) -> long
{
    std::istringstream in{read_gz(path)};
    std::string line;
    if (! std::getline(in, line))
        throw Error{"empty proof log"};
    auto header = nlohmann::json::parse(line);
    int k = header.at("k"), l = header.at("l");
    long n_max = header.at("n_max");

    std::map<std::string, std::string> entries;
    nlohmann::json footer;
    while (std::getline(in, line)) {
        if (! line.empty() && line.front() == '{') {
            footer = nlohmann::json::parse(line);
            break;
        }
        auto semi = line.find(';');
        if (semi == std::string::npos)
            throw Error{"malformed proof log line: " + line};
        entries.emplace(line.substr(0, semi), line.substr(semi + 1));
    }
    if (footer.is_null() || ! footer.at("decided").get<bool>() || footer.at("truncated").get<bool>())
        throw Error{"proof log does not record a complete decision"};
    long claimed = footer.at("max_depth").get<long>() + 1;

    auto check_entry = [&] (const std::vector<int> & c, std::size_t len, int max_colour) {
        auto it = entries.find(prefix_string(c, len));
        if (it == entries.end())
            throw Error{"proof log is missing the dead end " + prefix_string(c, len)};
        std::istringstream parts{it->second};
        std::string item;
        std::set<int> refuted;
        while (std::getline(parts, item, ',')) {
            int colour;
            long start, d;
            char sep1, sep2;
            std::istringstream f{item};
            if (! (f >> colour >> sep1 >> start >> sep2 >> d) || start < 1 || d < 1)
                throw Error{"malformed refutation " + item};
            std::vector<int> ext(c.begin(), c.begin() + len);
            ext.push_back(colour);
            if (start + (l - 1) * d != long(len) + 1)
                throw Error{"refutation AP does not end at the new position"};
            for (int i = 0 ; i < l ; ++i)
                if (ext[start - 1 + i * d] != colour)
                    throw Error{"refutation AP is not monochromatic"};
            refuted.insert(colour);
        }
        for (int colour = 0 ; colour < k && colour <= max_colour + 1 ; ++colour)
            if (! refuted.count(colour))
                throw Error{"dead end leaves colour " + std::to_string(colour) + " unrefuted"};
    };

    std::vector<int> c(std::size_t(n_max) + 1, 0);
    std::function<void (std::size_t, int)> walk = [&] (std::size_t len, int max_colour) {
        if (long(len) >= claimed)
            throw Error{"AP-free colouring longer than the claimed value"};
        bool any_live = false;
        for (int colour = 0 ; colour < k && colour <= max_colour + 1 ; ++colour) {
            c[len] = colour;
            if (ap_ending_at(c, len, l))
                continue;
            any_live = true;
            walk(len + 1, std::max(max_colour, colour));
        }
        if (! any_live)
            check_entry(c, len, max_colour);
    };
    walk(0, -1);
    return claimed;
}

auto amc::vdw_common_difference(const Colouring & colouring, long lo, long hi, int l) -> CommonDifference
{
    if (l < 2)
        throw Error{"AP length must be at least 2"};
    if (hi - lo + 1 < l)
        throw Error{"window [" + std::to_string(lo) + ", " + std::to_string(hi) + "] too small for " + std::to_string(l) + "-term APs"};
    if (hi - lo + 1 > 200000)
        throw Error{"window too large"};

    std::vector<int> c;
    for (long x = lo ; x <= hi ; ++x)
        c.push_back(colouring.colour(Point{{Rational{x}}}));
    int palette = *std::max_element(c.begin(), c.end()) + 1;

    CommonDifference best;
    long best_count = -1;
    long n = hi - lo + 1;
    for (long t = 1 ; t * (l - 1) < n ; ++t) {
        std::vector<long> count(palette, 0);
        for (long s = 0 ; s + t * (l - 1) < n ; ++s) {
            bool mono = true;
            for (int i = 1 ; i < l && mono ; ++i)
                mono = c[s + i * t] == c[s];
            if (mono)
                ++count[c[s]];
        }
        for (int col = 0 ; col < palette ; ++col)
            if (count[col] > best_count) {
                best_count = count[col];
                best.t = t;
                best.colour = col;
            }
    }
    for (long s = 0 ; s + best.t * (l - 1) < n ; ++s) {
        bool mono = c[s] == best.colour;
        for (int i = 1 ; i < l && mono ; ++i)
            mono = c[s + i * best.t] == best.colour;
        if (mono)
            best.starts.push_back(lo + s);
    }
    return best;
}

HJCube::HJCube(int n, int N, std::function<auto (const std::vector<int> &) -> int> colour) :
    _n(n),
    _N(N),
    _colour(std::move(colour)),
    _size(1)
{
    if (n < 1 || N < 1)
        throw Error{"cube needs n >= 1 and N >= 1"};
    for (int i = 0 ; i < N ; ++i) {
        if (_size > (std::uint64_t(1) << 40) / std::uint64_t(n))
            throw Error{"cube too large"};
        _size *= std::uint64_t(n);
    }
    if (_size <= (std::uint64_t(1) << 24)) {
        _memo = std::make_unique<std::atomic<int>[]>(_size);
        for (std::uint64_t i = 0 ; i < _size ; ++i)
            _memo[i] = -1;
    }
}

auto HJCube::colour(const std::vector<int> & x) const -> int
{
    if (! _memo)
        return _colour(x);
    std::uint64_t idx = 0;
    for (auto v : x)
        idx = idx * std::uint64_t(_n) + std::uint64_t(v - 1);
    int c = _memo[idx].load();
    if (c < 0) {
        c = _colour(x);
        _memo[idx] = c;
    }
    return c;
}

auto CombinatorialLine::moving() const -> std::vector<int>
{
    std::vector<int> m;
    for (std::size_t i = 0 ; i < pattern.size() ; ++i)
        if (pattern[i] == 0)
            m.push_back(int(i));
    return m;
}

auto CombinatorialLine::points(int n) const -> std::vector<std::vector<int>>
{
    std::vector<std::vector<int>> out;
    for (int j = 1 ; j <= n ; ++j) {
        auto x = pattern;
        for (auto & v : x)
            if (v == 0)
                v = j;
        out.push_back(x);
    }
    return out;
}

auto CombinatorialLine::to_json() const -> nlohmann::json
{
    nlohmann::json fixed = nlohmann::json::object();
    for (std::size_t i = 0 ; i < pattern.size() ; ++i)
        if (pattern[i] != 0)
            fixed[std::to_string(i + 1)] = pattern[i];
    return {{"template", pattern}, {"moving", moving()}, {"fixed", fixed}};
}

auto amc::hj_find_line(const HJCube & cube, unsigned jobs) -> std::optional<CombinatorialLine>
{
    int n = cube.n(), N = cube.N();
    std::uint64_t total = 1;
    for (int i = 0 ; i < N ; ++i) {
        if (total > (std::uint64_t(1) << 40) / std::uint64_t(n + 1))
            throw Error{"too many candidate lines"};
        total *= std::uint64_t(n + 1);
    }

    std::uint64_t chunk = std::max<std::uint64_t>(1, total / 256);
    std::size_t chunks = std::size_t((total + chunk - 1) / chunk);
    std::atomic<std::size_t> best{chunks};
    std::vector<std::vector<int>> found(chunks);

    parallel_indices(chunks, jobs, [&] (std::size_t ci) {
        if (ci > best.load())
            return;
        std::vector<int> t(N), x(N);
        for (std::uint64_t idx = ci * chunk ; idx < std::min(total, (ci + 1) * chunk) ; ++idx) {
            std::uint64_t v = idx;
            bool moving = false;
            for (int i = N - 1 ; i >= 0 ; --i) {
                t[i] = int(v % std::uint64_t(n + 1));
                v /= std::uint64_t(n + 1);
                moving = moving || t[i] == 0;
            }
            if (! moving)
                continue;
            int first = -1;
            bool mono = true;
            for (int j = 1 ; j <= n && mono ; ++j) {
                for (int i = 0 ; i < N ; ++i)
                    x[i] = t[i] == 0 ? j : t[i];
                int c = cube.colour(x);
                if (first < 0)
                    first = c;
                mono = c == first;
            }
            if (mono) {
                found[ci] = t;
                std::size_t cur = best.load();
                while (ci < cur && ! best.compare_exchange_weak(cur, ci))
                    ;
                return;
            }
        }
    });

    if (best.load() == chunks)
        return std::nullopt;
    return CombinatorialLine{found[best.load()]};
}

auto GallaiEmbedding::image(const std::vector<int> & x) const -> Point
{
    Point p = Point::zero(S.front().dimension());
    for (std::size_t i = 0 ; i < x.size() ; ++i)
        p = p + S[x[i] - 1].scaled(Rational{lambdas[i]});
    return p;
}

auto GallaiEmbedding::to_json() const -> nlohmann::json
{
    auto pts = nlohmann::json::array();
    for (auto & p : S)
        pts.push_back(p.to_json());
    auto ls = nlohmann::json::array();
    for (auto & l : lambdas)
        ls.push_back(l.get_str());
    return {{"S", pts}, {"N", N}, {"lambdas", ls}, {"injective", injective}};
}

auto amc::build_gallai_embedding(const std::vector<Point> & S, int N) -> GallaiEmbedding
{
    std::size_t n = S.size();
    if (n < 2)
        throw Error{"Gallai embedding needs at least two points"};
    if (N < 1)
        throw Error{"cube dimension must be at least 1"};
    std::set<Point> distinct(S.begin(), S.end());
    if (distinct.size() != n)
        throw Error{"pattern points must be distinct"};
    for (auto & p : S) {
        if (p.dimension() != S.front().dimension())
            throw Error{"pattern points have different dimensions"};
        for (auto & c : p.coords())
            if (! is_integer(c))
                throw Error{"Gallai embedding needs integer points"};
    }
    double cube = std::pow(double(n), double(N));
    if (cube > double(1 << 22))
        throw Error{"cube [n]^N too large to verify injectivity"};
    Integer cap{static_cast<unsigned long>(cube)};

    GallaiEmbedding e;
    e.S = S;
    e.N = N;
    std::vector<Point> images{Point::zero(S.front().dimension())};
    for (int i = 0 ; i < N ; ++i) {
        bool placed = false;
        for (Integer lambda{1} ; lambda <= cap ; ++lambda) {
            std::vector<Point> next;
            next.reserve(images.size() * n);
            for (auto & p : images)
                for (auto & s : S)
                    next.push_back(p + s.scaled(Rational{lambda}));
            std::set<Point> seen(next.begin(), next.end());
            if (seen.size() == next.size()) {
                e.lambdas.push_back(lambda);
                images = std::move(next);
                placed = true;
                break;
            }
        }
        if (! placed)
            throw Error{"internal: no weight up to n^N keeps the embedding injective"};
    }

    // independent check over the whole cube
    std::set<Point> all;
    std::vector<int> x(N, 1);
    while (true) {
        all.insert(e.image(x));
        int i = N - 1;
        while (i >= 0 && x[i] == int(n)) {
            x[i] = 1;
            --i;
        }
        if (i < 0)
            break;
        ++x[i];
    }
    e.injective = all.size() == std::size_t(cube);
    if (! e.injective)
        throw Error{"internal: Gallai embedding is not injective"};
    return e;
}

auto amc::gallai_via_hj(const ColouringPtr & colouring, const std::vector<Point> & S, int N,
        const std::optional<Window> & window, unsigned jobs) -> Witness
{
    auto e = build_gallai_embedding(S, N);
    std::size_t d = S.front().dimension();
    if (! colouring->accepts_dimension(d))
        throw Error{"dimension mismatch: colouring " + std::to_string(colouring->dimension()) + " vs pattern " + std::to_string(d)};
    std::string weights = "greedy";

    auto range_of = [&] (const std::vector<Integer> & lambdas) {
        std::vector<Rational> lo(d, Rational{0}), hi(d, Rational{0});
        for (std::size_t k = 0 ; k < d ; ++k) {
            Rational mn = S.front()[k], mx = S.front()[k];
            for (auto & s : S) {
                mn = std::min(mn, s[k]);
                mx = std::max(mx, s[k]);
            }
            for (auto & l : lambdas) {
                lo[k] += Rational{l} * mn;
                hi[k] += Rational{l} * mx;
            }
        }
        return std::pair{lo, hi};
    };

    Point translation = Point::zero(d);
    if (window) {
        if (window->dimension() != d)
            throw Error{"dimension mismatch: window " + std::to_string(window->dimension()) + " vs pattern " + std::to_string(d)};
        auto fits = [&] (const std::vector<Integer> & lambdas) {
            auto [lo, hi] = range_of(lambdas);
            for (std::size_t k = 0 ; k < d ; ++k)
                if (hi[k] - lo[k] > window->upper()[k] - window->lower()[k])
                    return false;
            return true;
        };
        if (! fits(e.lambdas)) {
            e.lambdas.assign(std::size_t(N), Integer{1});
            e.injective = false;
            weights = "unit";
            if (! fits(e.lambdas))
                throw Error{"window too small for the cube image even with unit weights"};
        }
        auto [lo, hi] = range_of(e.lambdas);
        std::vector<Rational> t;
        for (std::size_t k = 0 ; k < d ; ++k)
            t.push_back(window->lower()[k] - lo[k]);
        translation = Point{std::move(t)};
    }

    HJCube cube{int(S.size()), N, [&] (const std::vector<int> & x) { return colouring->colour(e.image(x) + translation); }};

    Witness w;
    w.operation = "gallai_via_hj";
    w.colouring = colouring->to_json();
    auto pts = nlohmann::json::array();
    for (auto & p : S)
        pts.push_back(p.to_json());
    auto ls = nlohmann::json::array();
    for (auto & l : e.lambdas)
        ls.push_back(l.get_str());
    w.search_space = {
        {"operation", w.operation},
        {"pattern", {{"points", pts}}},
        {"N", N},
        {"weights", weights},
        {"lambdas", ls},
        {"translation", translation.to_json()},
        {"order", "line templates over {*,1..n}^N in base n+1, first coordinate most significant"}
    };
    if (window)
        w.search_space["window"] = window->to_json();
    if (weights == "unit")
        w.caveats.push_back("unit weights: the cube map is not injective, lines still map to homothets");

    auto line = hj_find_line(cube, jobs);
    if (! line) {
        w.kind = WitnessKind::Exhausted;
        w.extra["candidates"] = std::pow(double(S.size() + 1), double(N)) - std::pow(double(S.size()), double(N));
        w.caveats.push_back("no monochromatic line: N is below the Hales-Jewett threshold for this colouring");
        return w;
    }

    Integer scale{0};
    Point c = translation;
    for (int i = 0 ; i < N ; ++i) {
        if (line->pattern[i] == 0)
            scale += e.lambdas[i];
        else
            c = c + S[line->pattern[i] - 1].scaled(Rational{e.lambdas[i]});
    }
    w.kind = WitnessKind::MonoHomothet;
    w.transform = SimilarityMap::homothety(Rational{scale}, c);
    for (auto & s : S) {
        Point p = (*w.transform)(s);
        w.evidence.push_back(Evidence{p, colouring->colour(p)});
    }
    Integer bound = Integer{N} * Integer{static_cast<unsigned long>(cube.point_count())};
    w.extra["line"] = line->to_json();
    w.extra["scale"] = scale.get_str();
    w.extra["scale_bound"] = bound.get_str();
    if (scale > bound)
        throw Error{"internal: homothet scale exceeds N n^N"};
    return w;
}
