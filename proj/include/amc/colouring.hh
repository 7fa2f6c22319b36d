#pragma once

#include <amc/geometry.hh>

#include <json.hpp>

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace amc
{
    enum class DomainKind
    {
        Integer,
        Rational,
        RealSampled
    };

    auto to_string(DomainKind d) -> std::string;

    /// A finite colouring: a pure, total map from points of its domain to
    /// {0, ..., palette_size() - 1}.
    class Colouring
    {
        public:
            virtual ~Colouring() = default;

            /// Throws DomainError for points outside the domain.
            virtual auto colour(const Point & p) const -> int = 0;

            virtual auto palette_size() const -> int = 0;

            /// 0 means the colouring is defined in every dimension.
            virtual auto dimension() const -> std::size_t = 0;
            virtual auto domain() const -> DomainKind = 0;
            virtual auto kind() const -> std::string = 0;
            virtual auto to_json() const -> nlohmann::json = 0;

            auto accepts_dimension(std::size_t d) const -> bool { return dimension() == 0 || dimension() == d; }

        protected:
            auto check_dimension(const Point & p) const -> void;
    };

    using ColouringPtr = std::shared_ptr<const Colouring>;

    auto colouring_from_json(const nlohmann::json & j) -> ColouringPtr;

    /// Short textual names used on the command line, e.g. "mod3", "dyadic",
    /// "block:10", "alt-shell:5", "split-shell:1,2,3,5@2", "mondrian", "cone:2:0,0;1,0;3,0@1".
    auto parse_colouring(std::string_view spec) -> ColouringPtr;

    class ConstantColouring : public Colouring
    {
        private:
            int _colour;
            std::size_t _dimension;

        public:
            explicit ConstantColouring(int colour = 0, std::size_t dimension = 0);

            auto colour(const Point & p) const -> int override;
            auto palette_size() const -> int override { return _colour + 1; }
            auto dimension() const -> std::size_t override { return _dimension; }
            auto domain() const -> DomainKind override { return DomainKind::RealSampled; }
            auto kind() const -> std::string override { return "constant"; }
            auto to_json() const -> nlohmann::json override;
    };

    /// Integer points coloured by table[(x_1 + ... + x_d) mod period]. The
    /// mod-3 colouring of the naturals and the checkerboard are instances.
    class PeriodicColouring : public Colouring
    {
        private:
            std::vector<int> _table;
            std::size_t _dimension;
            int _palette;

        public:
            PeriodicColouring(std::vector<int> table, std::size_t dimension = 0);

            static auto residues(int period, std::size_t dimension = 0) -> PeriodicColouring;

            auto colour(const Point & p) const -> int override;
            auto palette_size() const -> int override { return _palette; }
            auto dimension() const -> std::size_t override { return _dimension; }
            auto domain() const -> DomainKind override { return DomainKind::Integer; }
            auto kind() const -> std::string override { return "periodic"; }
            auto to_json() const -> nlohmann::json override;

            auto period() const -> int { return int(_table.size()); }
    };

    /// A finite lookup table.
    class ExplicitColouring : public Colouring
    {
        private:
            std::map<Point, int> _table;
            std::size_t _dimension;
            int _palette;

        public:
            ExplicitColouring(std::map<Point, int> table, int palette = 0);

            /// Colours 1..n of the integer line from a string such as "RBRB".
            static auto from_word(std::string_view word, long long first = 1) -> ExplicitColouring;

            auto colour(const Point & p) const -> int override;
            auto palette_size() const -> int override { return _palette; }
            auto dimension() const -> std::size_t override { return _dimension; }
            auto domain() const -> DomainKind override { return DomainKind::Integer; }
            auto kind() const -> std::string override { return "explicit"; }
            auto to_json() const -> nlohmann::json override;

            auto table() const -> const std::map<Point, int> & { return _table; }
    };

    /// Colour 0 where the last coordinate is positive (non-negative when
    /// closed), colour 1 elsewhere.
    class HalfSpaceColouring : public Colouring
    {
        private:
            bool _closed;
            std::size_t _dimension;

        public:
            explicit HalfSpaceColouring(bool closed = false, std::size_t dimension = 0);

            auto colour(const Point & p) const -> int override;
            auto palette_size() const -> int override { return 2; }
            auto dimension() const -> std::size_t override { return _dimension; }
            auto domain() const -> DomainKind override { return DomainKind::RealSampled; }
            auto kind() const -> std::string override { return "halfspace"; }
            auto to_json() const -> nlohmann::json override;
    };

    /// floor(x_d / width) mod colours: parallel strips.
    class StripColouring : public Colouring
    {
        private:
            Rational _width;
            int _colours;
            std::size_t _dimension;

        public:
            StripColouring(Rational width, int colours, std::size_t dimension = 0);

            auto colour(const Point & p) const -> int override;
            auto palette_size() const -> int override { return _colours; }
            auto dimension() const -> std::size_t override { return _dimension; }
            auto domain() const -> DomainKind override { return DomainKind::RealSampled; }
            auto kind() const -> std::string override { return "strip"; }
            auto to_json() const -> nlohmann::json override;
    };

    /// Parity of the 2-adic valuation on the rationals; 0 is given colour 0.
    class DyadicColouring : public Colouring
    {
        public:
            auto colour(const Point & p) const -> int override;
            auto palette_size() const -> int override { return 2; }
            auto dimension() const -> std::size_t override { return 1; }
            auto domain() const -> DomainKind override { return DomainKind::Rational; }
            auto kind() const -> std::string override { return "dyadic"; }
            auto to_json() const -> nlohmann::json override;
    };

    auto two_adic_valuation(const Rational & q) -> long;

    /// Integers coloured 0 when floor(i / D) is even, 1 otherwise.
    class BlockColouring : public Colouring
    {
        private:
            long long _block;

        public:
            explicit BlockColouring(long long block);

            auto colour(const Point & p) const -> int override;
            auto palette_size() const -> int override { return 2; }
            auto dimension() const -> std::size_t override { return 1; }
            auto domain() const -> DomainKind override { return DomainKind::Integer; }
            auto kind() const -> std::string override { return "block"; }
            auto to_json() const -> nlohmann::json override;

            auto block() const -> long long { return _block; }
    };

    enum class ShellVariant
    {
        Alternating,
        Stepped
    };

    /// Geometric shells on the half-line. Alternating lives on x > 0: colour 2 on
    /// (0,1), colour i mod 2 on [K^i, K^(i+1)). Stepped lives on x >= 0: colour 0
    /// on [0,L), and [L K^i, L K^(i+1)) is cut into L equal half-open pieces
    /// coloured j (i odd) or L + j (i even) for the j-th piece.
    class ShellColouring1D : public Colouring
    {
        private:
            ShellVariant _variant;
            Integer _K, _L;

        public:
            ShellColouring1D(ShellVariant variant, Integer K, Integer L = 0);

            /// Smallest admissible K (and L) for a sorted 4-point pattern.
            static auto for_pattern(ShellVariant variant, const std::vector<Rational> & sorted) -> ShellColouring1D;

            auto colour(const Point & p) const -> int override;
            auto palette_size() const -> int override;
            auto dimension() const -> std::size_t override { return 1; }
            auto domain() const -> DomainKind override { return DomainKind::RealSampled; }
            auto kind() const -> std::string override { return _variant == ShellVariant::Alternating ? "alt-shell" : "step-shell"; }
            auto to_json() const -> nlohmann::json override;

            auto variant() const -> ShellVariant { return _variant; }
            auto K() const -> const Integer & { return _K; }
            auto L() const -> const Integer & { return _L; }

            /// Index i of the shell containing x, or -1 below the first shell.
            auto shell_index(const Rational & x) const -> long;
    };

    /// x -> inner(-x).
    class ReflectedColouring : public Colouring
    {
        private:
            ColouringPtr _inner;

        public:
            explicit ReflectedColouring(ColouringPtr inner);

            auto colour(const Point & p) const -> int override;
            auto palette_size() const -> int override { return _inner->palette_size(); }
            auto dimension() const -> std::size_t override { return _inner->dimension(); }
            auto domain() const -> DomainKind override { return _inner->domain(); }
            auto kind() const -> std::string override { return "reflected"; }
            auto to_json() const -> nlohmann::json override;

            auto inner() const -> const ColouringPtr & { return _inner; }
    };

    /// Region rules understood by DisjointUnionColouring.
    enum class RegionRule
    {
        PositiveElseRest,     // x_1 > 0 -> 0, else 1
        NonNegativeElseRest   // x_1 >= 0 -> 0, else 1
    };

    /// Disjoint palettes: colour(p) = offset(region(p)) + part(region)(p).
    class DisjointUnionColouring : public Colouring
    {
        private:
            std::vector<ColouringPtr> _parts;
            std::vector<int> _offsets;
            RegionRule _rule;
            std::string _label;
            nlohmann::json _label_params;

        public:
            DisjointUnionColouring(std::vector<ColouringPtr> parts, RegionRule rule);

            auto colour(const Point & p) const -> int override;
            auto palette_size() const -> int override;
            auto dimension() const -> std::size_t override;
            auto domain() const -> DomainKind override;
            auto kind() const -> std::string override { return "disjoint"; }
            auto to_json() const -> nlohmann::json override;

            auto region_of(const Point & p) const -> std::size_t;
            auto parts() const -> const std::vector<ColouringPtr> & { return _parts; }
            auto offsets() const -> const std::vector<int> & { return _offsets; }

            /// Records that this union was produced by a named construction, so
            /// it serialises back to that construction.
            auto set_label(std::string label, nlohmann::json params) -> void;
    };

    auto compose_disjoint(std::vector<ColouringPtr> parts, RegionRule rule) -> ColouringPtr;

    /// The full-line colouring for a 4-point pattern p1 < p2 < p3 < p4 with the
    /// origin at p2 or p3: the half-line shell colouring for the pattern on one
    /// side, the reflected one for the negated pattern on the other side.
    auto split_shell_colouring(const std::vector<Rational> & pattern, std::size_t origin_index) -> ColouringPtr;

    /// Four colours on the plane: 2 h + (i mod 2), where i >= 1 is minimal
    /// with p in [-4^i, 4^(i-1)]^2 and h = 0 for x < y, h = 1 for x >= y.
    class MondrianColouring : public Colouring
    {
        public:
            auto colour(const Point & p) const -> int override;
            auto palette_size() const -> int override { return 4; }
            auto dimension() const -> std::size_t override { return 2; }
            auto domain() const -> DomainKind override { return DomainKind::RealSampled; }
            auto kind() const -> std::string override { return "mondrian"; }
            auto to_json() const -> nlohmann::json override;

            static auto square_index(const Rational & x, const Rational & y) -> long;
    };

    /// Mondrian on every plane R^2 + t, with the copy (offset 0 or 4) chosen by
    /// floor(log2(|t|_1 + 1)) mod 2 on the remaining coordinates t.
    class FibreColouring : public Colouring
    {
        private:
            std::size_t _dimension;

        public:
            explicit FibreColouring(std::size_t dimension);

            auto colour(const Point & p) const -> int override;
            auto palette_size() const -> int override { return 8; }
            auto dimension() const -> std::size_t override { return _dimension; }
            auto domain() const -> DomainKind override { return DomainKind::RealSampled; }
            auto kind() const -> std::string override { return "fibre"; }
            auto to_json() const -> nlohmann::json override;
    };

    /// One cell of a cone partition together with an exact rational isometry
    /// moving it next to the diagonal x_1 = ... = x_d.
    struct ConeFrame
    {
        std::vector<Point> generators;
        Point axis;
        Matrix isometry;
    };

    class ConePartition
    {
        private:
            std::size_t _dimension;
            double _alpha;
            long _bins;
            std::vector<Point> _fan;  // d = 2 sector boundaries

        public:
            ConePartition(std::size_t d, double alpha);

            auto dimension() const -> std::size_t { return _dimension; }
            auto alpha() const -> double { return _alpha; }
            auto cone_count() const -> long;
            auto bins() const -> long { return _bins; }

            /// Exact index of the cone containing p; the origin lies in cone 0.
            auto cone_of(const Point & p) const -> long;
            auto frame(long index) const -> ConeFrame;
    };

    /// Cap on the number of cones a partition may have.
    inline constexpr long max_cones = 1'000'000;

    auto build_cone_partition(std::size_t d, double alpha) -> std::vector<ConeFrame>;

    /// The cone-shell colouring: each cone gets its own palette {0, ..., 2L}
    /// and colours by the l1 norm of its image in the reference cone.
    class ConeShellColouring : public Colouring
    {
        private:
            std::size_t _dimension;
            Integer _K, _L;
            double _alpha;
            std::shared_ptr<const ConePartition> _partition;
            std::vector<Point> _pattern;
            mutable std::mutex _frames_mutex;
            mutable std::map<long, Matrix> _frames;

            auto isometry(long cone) const -> Matrix;

        public:
            ConeShellColouring(std::size_t d, Integer K, Integer L, double alpha);

            /// Smallest K with (K-1)^2 > 4 d r^2, r the largest distance ratio
            /// of the pattern; smallest L with L^2 d >= K^4; alpha small enough
            /// for the shell argument and for the cone to sit in the orthant.
            static auto for_pattern(const std::vector<Point> & pattern, std::optional<double> alpha = std::nullopt)
                -> std::shared_ptr<ConeShellColouring>;

            auto colour(const Point & p) const -> int override;
            auto palette_size() const -> int override;
            auto dimension() const -> std::size_t override { return _dimension; }
            auto domain() const -> DomainKind override { return DomainKind::RealSampled; }
            auto kind() const -> std::string override { return "cone"; }
            auto to_json() const -> nlohmann::json override;

            auto K() const -> const Integer & { return _K; }
            auto L() const -> const Integer & { return _L; }
            auto alpha() const -> double { return _alpha; }
            auto partition() const -> const ConePartition & { return *_partition; }

            /// l1 norm of the image of p in the reference cone, exactly.
            auto reference_norm(const Point & p) const -> Rational;
            auto cone_of(const Point & p) const -> long { return _partition->cone_of(p); }

            /// Colour within a single cone's palette for a given l1 norm.
            auto shell_colour(const Rational & norm) const -> int;
    };

    /// Structural AP-freeness certificate for a shell-type colouring.
    struct ShellCertificate
    {
        std::string kind;
        bool ap_free;
        std::string inequality;
        std::string crossover;
        nlohmann::json parameters;

        /// The index from which every shell is wider than step t.
        std::function<Integer (const Integer & t)> crossover_index;

        auto to_json() const -> nlohmann::json;
    };

    auto certify_shell_ap_free(const Colouring & colouring) -> ShellCertificate;
}
