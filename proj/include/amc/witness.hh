#pragma once

#include <amc/colouring.hh>
#include <amc/geometry.hh>

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace amc
{
    enum class WitnessKind
    {
        AMCopy,
        MonoAP,
        MonoHomothet,
        MonoSublattice,
        Exhausted
    };

    auto to_string(WitnessKind k) -> std::string;
    auto witness_kind_from_string(const std::string & s) -> WitnessKind;

    struct Evidence
    {
        Point point;
        int colour;
    };

    /// A search outcome that can be replayed against the colouring.
    struct Witness
    {
        WitnessKind kind = WitnessKind::Exhausted;
        std::string operation;
        nlohmann::json colouring;
        std::optional<SimilarityMap> transform;
        std::optional<std::size_t> origin_index;
        std::vector<Evidence> evidence;
        nlohmann::json search_space;
        std::vector<std::string> caveats;
        nlohmann::json extra = nlohmann::json::object();

        auto found() const -> bool { return kind != WitnessKind::Exhausted; }
        auto search_space_hash() const -> std::string;

        auto to_json() const -> nlohmann::json;
        static auto from_json(const nlohmann::json & j) -> Witness;
    };

    struct VerifyReport
    {
        bool ok = true;
        std::vector<std::string> problems;
    };

    /// Re-evaluates every evidence point and checks the shape the witness kind
    /// promises (AM split, equal spacing, homothet image of the pattern).
    auto verify_witness(const Witness & w, const Colouring & colouring) -> VerifyReport;
}
