#include <amc/search.hh>
#include <amc/parallel.hh>

#include <algorithm>
#include <atomic>
#include <limits>
#include <numeric>

using namespace amc;

namespace
{
    using GridVector = std::vector<std::int64_t>;

    struct ScanJob
    {
        std::vector<GridVector> offsets;
    };

    enum class Want
    {
        AlmostMono,
        Mono
    };

    struct ScanHit
    {
        std::size_t job;
        std::uint64_t anchor;
    };

    struct ScanResult
    {
        std::optional<ScanHit> hit;
        std::uint64_t candidates = 0;
    };

    const std::size_t no_job = std::numeric_limits<std::size_t>::max();

    /// Scans jobs in order; within a job, anchors in row-major order. The
    /// first hit of the first job that has one is returned, whatever the
    /// thread count.
    auto scan(const ColourTable & table, const std::vector<ScanJob> & jobs, Want want, std::size_t origin, unsigned threads)
        -> ScanResult
    {
        const Window & window = table.window();
        std::size_t d = window.dimension();
        const auto & valid = table.valid_points();

        std::atomic<std::size_t> best{no_job};
        std::atomic<std::uint64_t> candidates{0};
        std::vector<std::uint64_t> hit_anchor(jobs.size(), 0);

        parallel_indices(jobs.size(), threads, [&] (std::size_t j) {
            if (j > best.load())
                return;
            auto & offsets = jobs[j].offsets;
            std::size_t n = offsets.size();

            GridVector lo(d), hi(d);
            for (std::size_t k = 0 ; k < d ; ++k) {
                std::int64_t mn = 0, mx = 0;
                for (auto & o : offsets) {
                    mn = std::min(mn, o[k]);
                    mx = std::max(mx, o[k]);
                }
                lo[k] = window.grid_lo(k) - mn;
                hi[k] = window.grid_hi(k) - mx;
                if (lo[k] > hi[k])
                    return;
            }

            std::vector<std::int64_t> linear_offset(n, 0);
            for (std::size_t i = 0 ; i < n ; ++i)
                for (std::size_t k = 0 ; k < d ; ++k)
                    linear_offset[i] += offsets[i][k] * table.stride(k);

            std::size_t ref = (want == Want::AlmostMono && origin == 0) ? 1 : 0;

            // restrict to the slab allowed by the first coordinate
            std::uint64_t first = std::uint64_t(lo[0] - window.grid_lo(0)) * std::uint64_t(table.stride(0));
            std::uint64_t last = std::uint64_t(hi[0] - window.grid_lo(0) + 1) * std::uint64_t(table.stride(0));
            auto begin = std::lower_bound(valid.begin(), valid.end(), first);
            auto end = std::lower_bound(valid.begin(), valid.end(), last);

            std::uint64_t local = 0;
            for (auto it = begin ; it != end ; ++it) {
                std::uint64_t v = *it;
                bool inside = true;
                for (std::size_t k = 1 ; k < d ; ++k) {
                    std::int64_t c = window.grid_lo(k) + std::int64_t((v / std::uint64_t(table.stride(k))) % std::uint64_t(table.extent(k)));
                    if (c < lo[k] || c > hi[k]) {
                        inside = false;
                        break;
                    }
                }
                if (! inside)
                    continue;
                ++local;

                std::int32_t c_ref = table.at_linear(std::uint64_t(std::int64_t(v) + linear_offset[ref]));
                if (c_ref < 0)
                    continue;
                bool ok = true;
                for (std::size_t i = 0 ; i < n && ok ; ++i) {
                    if (i == ref || (want == Want::AlmostMono && i == origin))
                        continue;
                    std::int32_t c = table.at_linear(std::uint64_t(std::int64_t(v) + linear_offset[i]));
                    ok = c == c_ref;
                }
                if (! ok)
                    continue;
                if (want == Want::AlmostMono) {
                    std::int32_t c = table.at_linear(std::uint64_t(std::int64_t(v) + linear_offset[origin]));
                    if (c < 0 || c == c_ref)
                        continue;
                }

                hit_anchor[j] = v;
                std::size_t cur = best.load();
                while (j < cur && ! best.compare_exchange_weak(cur, j))
                    ;
                return;
            }
            candidates += local;
        });

        ScanResult r;
        r.candidates = candidates.load();
        if (best.load() != no_job)
            r.hit = ScanHit{best.load(), hit_anchor[best.load()]};
        return r;
    }

    auto gcd_of_differences(const std::vector<Point> & differences) -> Rational
    {
        Rational g{0};
        for (auto & p : differences)
            for (auto & c : p.coords())
                g = gcd_of(g, c);
        if (g == 0)
            throw Error{"pattern points must be distinct"};
        return g;
    }

    auto to_grid_vector(const Point & p) -> GridVector
    {
        GridVector v;
        for (auto & c : p.coords()) {
            if (! is_integer(c))
                throw Error{"internal: grid offset is not integral"};
            v.push_back(to_int64(c.get_num()));
        }
        return v;
    }

    auto add(const GridVector & a, const GridVector & b) -> GridVector
    {
        GridVector r(a.size());
        for (std::size_t k = 0 ; k < a.size() ; ++k)
            r[k] = a[k] + b[k];
        return r;
    }

    auto check_dimensions(const Colouring & colouring, std::size_t pattern_dim, const Window & window) -> void
    {
        if (pattern_dim != window.dimension())
            throw Error{"dimension mismatch: pattern " + std::to_string(pattern_dim) + " vs window " + std::to_string(window.dimension())};
        if (! colouring.accepts_dimension(window.dimension()))
            throw Error{"dimension mismatch: colouring " + std::to_string(colouring.dimension()) + " vs window " + std::to_string(window.dimension())};
    }

    auto common_caveats(const Colouring & colouring) -> std::vector<std::string>
    {
        std::vector<std::string> c;
        if (colouring.domain() == DomainKind::RealSampled)
            c.push_back("colouring of R^d evaluated at rational sample points only");
        return c;
    }

    auto points_json(const std::vector<Point> & pts) -> nlohmann::json
    {
        auto j = nlohmann::json::array();
        for (auto & p : pts)
            j.push_back(p.to_json());
        return j;
    }

    struct HomothetJob
    {
        Rational lambda;
        std::size_t rotation;
        std::int64_t m;
        Rational g;
    };

    /// Runs the (lambda, rotation) jobs against the pattern and fills in
    /// the witness.
    auto run_homothet_jobs(const ColouringPtr & colouring, const PatternPair & pattern, const Window & window,
            const std::vector<Matrix> & rotations, std::vector<HomothetJob> jobs, Want want, unsigned threads,
            Witness & w) -> void
    {
        std::vector<ScanJob> scan_jobs;
        std::vector<std::vector<Point>> base(rotations.size());
        for (std::size_t r = 0 ; r < rotations.size() ; ++r)
            for (auto & p : pattern.points())
                base[r].push_back(rotations[r] * (p - pattern.points().front()));

        for (auto & job : jobs) {
            ScanJob s;
            Rational factor = Rational{job.m} / job.g;
            for (auto & b : base[job.rotation])
                s.offsets.push_back(to_grid_vector(b.scaled(factor)));
            scan_jobs.push_back(std::move(s));
        }

        ColourTable table{window, *colouring, threads};
        auto result = scan(table, scan_jobs, want, pattern.origin_index(), threads);

        if (! result.hit) {
            w.kind = WitnessKind::Exhausted;
            w.extra["candidates"] = result.candidates;
            w.extra["jobs"] = scan_jobs.size();
            w.caveats.push_back("exhaustion is relative to the window and the scale bound");
            return;
        }

        auto & job = jobs[result.hit->job];
        auto anchor = table.coords_of(result.hit->anchor);
        w.kind = want == Want::AlmostMono ? WitnessKind::AMCopy : WitnessKind::MonoHomothet;
        std::vector<Point> images;
        for (auto & o : scan_jobs[result.hit->job].offsets) {
            auto g = add(anchor, o);
            auto p = window.point_at(g);
            w.evidence.push_back(Evidence{p, table.at_linear(table.linear(g))});
            images.push_back(p);
        }
        auto & R = rotations[job.rotation];
        Point c = images.front() - (R * pattern.points().front()).scaled(job.lambda);
        w.transform = SimilarityMap{job.lambda, R, c};
        if (want == Want::AlmostMono)
            w.origin_index = pattern.origin_index();
    }
}

auto amc::search_am_homothet(const ColouringPtr & colouring, const PatternPair & pattern, const Window & window,
        const Rational & lambda_max, unsigned jobs) -> Witness
{
    check_dimensions(*colouring, pattern.dimension(), window);
    if (lambda_max <= 0)
        throw Error{"lambda_max must be positive"};

    std::vector<Point> diffs;
    for (auto & p : pattern.points())
        diffs.push_back(p - pattern.points().front());
    Rational g = gcd_of_differences(diffs);
    Rational per_step = g * window.scale();
    Integer m_max = floor_of(lambda_max * per_step);
    if (m_max < 1)
        throw Error{"empty enumeration space: no admissible scale up to lambda_max on this grid"};
    if (m_max > 100'000'000)
        throw Error{"too many scales to enumerate (" + m_max.get_str() + ")"};

    std::vector<HomothetJob> hjobs;
    for (std::int64_t m = 1 ; m <= m_max.get_si() ; ++m)
        hjobs.push_back(HomothetJob{Rational{m} / per_step, 0, m, g});

    Witness w;
    w.operation = "search_am_homothet";
    w.colouring = colouring->to_json();
    w.caveats = common_caveats(*colouring);
    w.search_space = {
        {"operation", w.operation},
        {"pattern", pattern.to_json()},
        {"window", window.to_json()},
        {"lambda_max", to_string(lambda_max)},
        {"lambda_grid", {{"form", "m / (scale * g)"}, {"scale", window.scale()}, {"g", to_string(g)}, {"m_max", m_max.get_si()}}},
        {"order", "lambda ascending, then translation row-major"}
    };
    run_homothet_jobs(colouring, pattern, window, {Matrix::identity(pattern.dimension())}, std::move(hjobs),
            Want::AlmostMono, jobs, w);
    return w;
}

auto amc::search_am_similar_2d(const ColouringPtr & colouring, const PatternPair & pattern, const Window & window,
        const Rational & lambda_max, int max_rot_param, bool quarter_turns, unsigned jobs) -> Witness
{
    if (pattern.dimension() != 2)
        throw Error{"similar-copy search is planar: pattern dimension is " + std::to_string(pattern.dimension())};
    check_dimensions(*colouring, pattern.dimension(), window);
    if (lambda_max <= 0)
        throw Error{"lambda_max must be positive"};

    std::vector<Matrix> rotations;
    for (auto & r : rational_rotations_2d(max_rot_param)) {
        Matrix m = r.rotation();
        for (int q = 0 ; q < (quarter_turns ? 4 : 1) ; ++q) {
            if (std::find(rotations.begin(), rotations.end(), m) == rotations.end())
                rotations.push_back(m);
            m = quarter_turn() * m;
        }
    }

    std::vector<HomothetJob> hjobs;
    for (std::size_t r = 0 ; r < rotations.size() ; ++r) {
        std::vector<Point> diffs;
        for (auto & p : pattern.points())
            diffs.push_back(rotations[r] * (p - pattern.points().front()));
        Rational g = gcd_of_differences(diffs);
        Rational per_step = g * window.scale();
        Integer m_max = floor_of(lambda_max * per_step);
        if (m_max > 10'000'000)
            throw Error{"too many scales to enumerate (" + m_max.get_str() + ")"};
        for (std::int64_t m = 1 ; m <= m_max.get_si() ; ++m)
            hjobs.push_back(HomothetJob{Rational{m} / per_step, r, m, g});
    }
    if (hjobs.empty())
        throw Error{"empty enumeration space: no admissible scale up to lambda_max on this grid"};
    std::stable_sort(hjobs.begin(), hjobs.end(), [] (const HomothetJob & a, const HomothetJob & b) {
        if (a.lambda != b.lambda)
            return a.lambda < b.lambda;
        return a.rotation < b.rotation;
    });

    auto rot_json = nlohmann::json::array();
    for (auto & r : rotations)
        rot_json.push_back(r.to_json());

    Witness w;
    w.operation = "search_am_similar_2d";
    w.colouring = colouring->to_json();
    w.caveats = common_caveats(*colouring);
    w.caveats.push_back("rational rotations only: copies under other rotations were not examined");
    w.search_space = {
        {"operation", w.operation},
        {"pattern", pattern.to_json()},
        {"window", window.to_json()},
        {"lambda_max", to_string(lambda_max)},
        {"max_rot_param", max_rot_param},
        {"quarter_turns", quarter_turns},
        {"rotation_count", rotations.size()},
        {"rotations", rot_json},
        {"order", "lambda ascending, then rotation index, then translation row-major"}
    };
    run_homothet_jobs(colouring, pattern, window, rotations, std::move(hjobs), Want::AlmostMono, jobs, w);
    if (w.transform) {
        auto idx = std::find(rotations.begin(), rotations.end(), w.transform->rotation()) - rotations.begin();
        w.extra["rotation_index"] = idx;
        w.extra["axis_aligned"] = w.transform->rotation() == Matrix::identity(2);
    }
    return w;
}

auto amc::probe_mono_ap(const ColouringPtr & colouring, const Window & window, int n_terms, long t_max, unsigned jobs) -> Witness
{
    if (n_terms < 3)
        throw Error{"an AP probe needs at least 3 terms"};
    if (t_max < 1)
        throw Error{"t_max must be at least 1"};
    std::size_t d = window.dimension();
    if (! colouring->accepts_dimension(d))
        throw Error{"dimension mismatch: colouring " + std::to_string(colouring->dimension()) + " vs window " + std::to_string(d)};

    // canonical step vectors: first non-zero entry positive, by sup-norm then lex
    double count = std::pow(2.0 * double(t_max) + 1.0, double(d));
    if (count > 4e6)
        throw Error{"too many step vectors for t_max " + std::to_string(t_max) + " in dimension " + std::to_string(d)};
    std::vector<GridVector> steps;
    GridVector v(d, -t_max);
    while (true) {
        auto nz = std::find_if(v.begin(), v.end(), [] (std::int64_t x) { return x != 0; });
        if (nz != v.end() && *nz > 0)
            steps.push_back(v);
        std::size_t k = d;
        while (k > 0 && v[k - 1] == t_max) {
            v[k - 1] = -t_max;
            --k;
        }
        if (k == 0)
            break;
        ++v[k - 1];
    }
    std::stable_sort(steps.begin(), steps.end(), [] (const GridVector & a, const GridVector & b) {
        auto sup = [] (const GridVector & x) {
            std::int64_t s = 0;
            for (auto c : x)
                s = std::max(s, c < 0 ? -c : c);
            return s;
        };
        if (sup(a) != sup(b))
            return sup(a) < sup(b);
        return a < b;
    });

    std::vector<ScanJob> scan_jobs;
    for (auto & s : steps) {
        ScanJob job;
        for (int i = 0 ; i < n_terms ; ++i) {
            GridVector o(d);
            for (std::size_t k = 0 ; k < d ; ++k)
                o[k] = s[k] * i * window.scale();
            job.offsets.push_back(o);
        }
        scan_jobs.push_back(std::move(job));
    }

    Witness w;
    w.operation = "probe_mono_ap";
    w.colouring = colouring->to_json();
    w.caveats = common_caveats(*colouring);
    w.search_space = {
        {"operation", w.operation},
        {"window", window.to_json()},
        {"n_terms", n_terms},
        {"t_max", t_max},
        {"steps", steps.size()},
        {"order", "step by sup-norm then lexicographic, then start row-major"}
    };

    ColourTable table{window, *colouring, jobs};
    auto result = scan(table, scan_jobs, Want::Mono, 0, jobs);
    if (! result.hit) {
        w.kind = WitnessKind::Exhausted;
        w.extra["candidates"] = result.candidates;
        w.caveats.push_back("exhaustion is relative to the window and the step bound");
        return w;
    }
    w.kind = WitnessKind::MonoAP;
    auto anchor = table.coords_of(result.hit->anchor);
    for (auto & o : scan_jobs[result.hit->job].offsets) {
        auto g = add(anchor, o);
        w.evidence.push_back(Evidence{window.point_at(g), table.at_linear(table.linear(g))});
    }
    auto & s = steps[result.hit->job];
    w.extra["step"] = s;
    return w;
}

auto amc::search_mono_homothet(const ColouringPtr & colouring, const std::vector<Point> & pattern, const Window & window,
        long lambda_max, unsigned jobs) -> Witness
{
    if (pattern.size() < 2)
        throw Error{"a homothet search needs at least two pattern points"};
    check_dimensions(*colouring, pattern.front().dimension(), window);
    for (auto & p : pattern)
        for (auto & c : p.coords())
            if (! is_integer(c))
                throw Error{"monochromatic homothet search needs integer pattern points"};
    if (lambda_max < 1)
        throw Error{"lambda_max must be at least 1"};

    std::vector<HomothetJob> hjobs;
    // with g = 1 / scale, lambda = m / (scale g) = m
    Rational g{1, window.scale()};
    g.canonicalize();
    for (long m = 1 ; m <= lambda_max ; ++m)
        hjobs.push_back(HomothetJob{Rational{m}, 0, m, g});

    PatternPair as_pair = pattern.size() >= 3 ? PatternPair{pattern, 0} : PatternPair{{pattern[0], pattern[1], pattern[1] + (pattern[1] - pattern[0])}, 0};

    Witness w;
    w.operation = "search_mono_homothet";
    w.colouring = colouring->to_json();
    w.caveats = common_caveats(*colouring);
    w.search_space = {
        {"operation", w.operation},
        {"pattern", {{"points", points_json(pattern)}}},
        {"window", window.to_json()},
        {"lambda_max", lambda_max},
        {"order", "integer lambda ascending, then translation row-major"}
    };

    if (pattern.size() >= 3)
        run_homothet_jobs(colouring, as_pair, window, {Matrix::identity(window.dimension())}, std::move(hjobs), Want::Mono, jobs, w);
    else {
        // two points: scan directly with the exact two offsets
        std::vector<ScanJob> scan_jobs;
        for (auto & h : hjobs) {
            ScanJob s;
            s.offsets.push_back(GridVector(window.dimension(), 0));
            s.offsets.push_back(to_grid_vector((pattern[1] - pattern[0]).scaled(Rational{h.m} * window.scale())));
            scan_jobs.push_back(std::move(s));
        }
        ColourTable table{window, *colouring, jobs};
        auto result = scan(table, scan_jobs, Want::Mono, 0, jobs);
        if (! result.hit) {
            w.kind = WitnessKind::Exhausted;
            w.extra["candidates"] = result.candidates;
            w.caveats.push_back("exhaustion is relative to the window and the scale bound");
            return w;
        }
        w.kind = WitnessKind::MonoHomothet;
        auto anchor = table.coords_of(result.hit->anchor);
        for (auto & o : scan_jobs[result.hit->job].offsets) {
            auto gv = add(anchor, o);
            w.evidence.push_back(Evidence{window.point_at(gv), table.at_linear(table.linear(gv))});
        }
        Rational lambda{hjobs[result.hit->job].m};
        w.transform = SimilarityMap::homothety(lambda, w.evidence[0].point - pattern[0].scaled(lambda));
    }
    return w;
}

auto amc::middle_interval(const IntegerInterval & low, const IntegerInterval & high, const PatternPair & pattern) -> MiddleInterval
{
    if (pattern.size() != 3 || pattern.dimension() != 1)
        throw Error{"interval construction needs a 3-point pattern on the line"};
    std::vector<Rational> p;
    for (auto & q : pattern.points())
        p.push_back(q[0]);
    std::sort(p.begin(), p.end());

    MiddleInterval out;
    out.ratio = (p[2] - p[1]) / (p[2] - p[0]);
    out.M = out.ratio.get_den();
    auto & M = out.M;

    if (low.lo > low.hi || high.lo > high.hi)
        throw Error{"intervals must be non-empty"};
    if (low.size() != 2 * M)
        throw Error{"|low| must be 2M = " + Integer{2 * M}.get_str() + ", got " + low.size().get_str()};
    if (high.size() != M)
        throw Error{"|high| must be M = " + M.get_str() + ", got " + high.size().get_str()};
    if (! (low.hi < high.lo))
        throw Error{"max low must be smaller than min high"};

    auto & r = out.ratio;
    Integer q3 = high.lo;
    std::optional<Integer> q1;
    for (Integer q = low.lo ; q < low.lo + M ; ++q)
        if (is_integer(r * q + (1 - r) * q3)) {
            q1 = q;
            break;
        }
    if (! q1)
        throw Error{"internal: no q1 in the lower half of low gives an integer middle point"};

    Integer q2 = Rational{r * *q1 + (1 - r) * q3}.get_num();
    out.interval = IntegerInterval{q2, q2 + M - 1};
    for (Integer i = 0 ; i < M ; ++i) {
        IntervalTriple t{*q1 + i, q2 + i, q3 + i};
        if (Rational{t.q2} != r * t.q1 + (1 - r) * t.q3)
            throw Error{"internal: triple is not a homothet of the pattern"};
        out.triples.push_back(t);
    }

    if (! (low.hi < out.interval.hi && out.interval.hi < high.hi))
        throw Error{"the constructed middle = [" + out.interval.lo.get_str() + ", " + out.interval.hi.get_str()
            + "] violates max low < max middle < max high for these inputs"};
    return out;
}
