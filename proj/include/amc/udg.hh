#pragma once

#include <amc/geometry.hh>

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace amc
{
    struct GraphVertex
    {
        std::string id;
        std::optional<Point> position;
        /// Coordinates came from floating literals and are only approximate.
        bool numeric = false;
    };

    class UnitDistanceGraph
    {
        private:
            std::vector<GraphVertex> _vertices;
            std::vector<std::pair<std::size_t, std::size_t>> _edges;
            std::optional<std::size_t> _origin;
            std::vector<std::vector<std::size_t>> _adjacent;

        public:
            UnitDistanceGraph(std::vector<GraphVertex> vertices, std::vector<std::pair<std::size_t, std::size_t>> edges,
                    std::optional<std::size_t> origin = std::nullopt);

            /// {vertices: [{id, x?, y?}], edges: [[id, id]], origin?}
            static auto from_json(const nlohmann::json & j) -> UnitDistanceGraph;
            auto to_json() const -> nlohmann::json;

            auto vertices() const -> const std::vector<GraphVertex> & { return _vertices; }
            auto edges() const -> const std::vector<std::pair<std::size_t, std::size_t>> & { return _edges; }
            auto origin() const -> const std::optional<std::size_t> & { return _origin; }
            auto neighbours(std::size_t v) const -> const std::vector<std::size_t> & { return _adjacent[v]; }
            auto size() const -> std::size_t { return _vertices.size(); }
            auto index_of(const std::string & id) const -> std::size_t;
            auto with_origin(std::size_t v) const -> UnitDistanceGraph;
    };

    struct SearchTrace
    {
        std::uint64_t nodes = 0;
        std::uint64_t dead_ends = 0;
        std::string digest;

        auto to_json() const -> nlohmann::json;
    };

    struct ProperResult
    {
        std::optional<std::vector<int>> colouring;
        SearchTrace trace;
    };

    /// Backtracking with saturation-degree ordering; a new colour is only
    /// opened as the next unused one.
    auto solve_proper(const UnitDistanceGraph & graph, int k) -> ProperResult;

    struct OriginColouring
    {
        std::pair<int, int> origin_colours;
        /// Colour of every vertex; the origin's entry is -1.
        std::vector<int> colours;

        auto to_json(const UnitDistanceGraph & graph) const -> nlohmann::json;
    };

    struct OriginResult
    {
        std::optional<OriginColouring> colouring;
        std::vector<std::pair<int, int>> pairs_tried;
        SearchTrace trace;
    };

    /// Tries every origin pair {a, b}, removing a and b from the neighbours
    /// of the origin and list-colouring the rest.
    auto solve_bichromatic_origin(const UnitDistanceGraph & graph, int k, unsigned jobs = 1) -> OriginResult;

    auto is_proper(const UnitDistanceGraph & graph, const std::vector<int> & colours) -> bool;
    auto is_proper_with_origin(const UnitDistanceGraph & graph, const OriginColouring & c) -> bool;

    struct EdgeViolation
    {
        std::size_t a, b;
        double squared_length;
    };

    struct UnitDistanceReport
    {
        std::size_t exact_edges = 0, numeric_edges = 0;
        std::vector<EdgeViolation> violations;

        auto ok() const -> bool { return violations.empty(); }
        auto to_json(const UnitDistanceGraph & graph) const -> nlohmann::json;
    };

    /// Exact check for rational coordinates, 1e-12 otherwise.
    auto validate_unit_distances(const UnitDistanceGraph & graph) -> UnitDistanceReport;

    auto unit_triangle_graph() -> UnitDistanceGraph;
    auto moser_spindle_graph() -> UnitDistanceGraph;
}
