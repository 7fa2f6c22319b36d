#include <amc/witness.hh>
#include <amc/digest.hh>

using namespace amc;

auto amc::to_string(WitnessKind k) -> std::string
{
    switch (k) {
        case WitnessKind::AMCopy: return "AMCopy";
        case WitnessKind::MonoAP: return "MonoAP";
        case WitnessKind::MonoHomothet: return "MonoHomothet";
        case WitnessKind::MonoSublattice: return "MonoSublattice";
        case WitnessKind::Exhausted: return "Exhausted";
    }
    return "?";
}

auto amc::witness_kind_from_string(const std::string & s) -> WitnessKind
{
    for (auto k : {WitnessKind::AMCopy, WitnessKind::MonoAP, WitnessKind::MonoHomothet, WitnessKind::MonoSublattice, WitnessKind::Exhausted})
        if (to_string(k) == s)
            return k;
    throw Error{"unknown witness kind '" + s + "'"};
}

auto Witness::search_space_hash() const -> std::string
{
    return json_digest(search_space);
}

auto Witness::to_json() const -> nlohmann::json
{
    nlohmann::json j;
    j["schema"] = "amc-lab/witness/v1";
    j["kind"] = to_string(kind);
    j["operation"] = operation;
    j["colouring"] = colouring;
    if (transform)
        j["transform"] = transform->to_json();
    if (origin_index)
        j["origin_index"] = *origin_index;
    auto ev = nlohmann::json::array();
    for (auto & e : evidence)
        ev.push_back({{"point", e.point.to_json()}, {"colour", e.colour}});
    j["evidence"] = ev;
    j["search_space"] = search_space;
    j["search_space_hash"] = search_space_hash();
    j["caveats"] = caveats;
    j["extra"] = extra;
    return j;
}

auto Witness::from_json(const nlohmann::json & j) -> Witness
{
    if (j.value("schema", "") != "amc-lab/witness/v1")
        throw Error{"not a witness file (schema amc-lab/witness/v1 expected)"};
    Witness w;
    w.kind = witness_kind_from_string(j.at("kind").get<std::string>());
    w.operation = j.value("operation", "");
    w.colouring = j.at("colouring");
    if (j.contains("transform"))
        w.transform = SimilarityMap::from_json(j.at("transform"));
    if (j.contains("origin_index"))
        w.origin_index = j.at("origin_index").get<std::size_t>();
    for (auto & e : j.at("evidence"))
        w.evidence.push_back(Evidence{Point::from_json(e.at("point")), e.at("colour").get<int>()});
    w.search_space = j.at("search_space");
    w.caveats = j.value("caveats", std::vector<std::string>{});
    w.extra = j.value("extra", nlohmann::json::object());
    if (j.contains("search_space_hash") && j.at("search_space_hash").get<std::string>() != w.search_space_hash())
        throw Error{"search_space_hash does not match the recorded search space"};
    return w;
}

auto amc::verify_witness(const Witness & w, const Colouring & colouring) -> VerifyReport
{
    VerifyReport r;
    auto fail = [&] (std::string s) {
        r.ok = false;
        r.problems.push_back(std::move(s));
    };

    for (auto & e : w.evidence) {
        try {
            int c = colouring.colour(e.point);
            if (c != e.colour)
                fail("point " + to_string(e.point) + " has colour " + std::to_string(c) + ", witness says " + std::to_string(e.colour));
        }
        catch (const Error & err) {
            fail("point " + to_string(e.point) + ": " + err.what());
        }
    }

    auto all_same = [&] (std::optional<std::size_t> skip) {
        std::optional<int> c;
        for (std::size_t i = 0 ; i < w.evidence.size() ; ++i) {
            if (skip && i == *skip)
                continue;
            if (c && *c != w.evidence[i].colour)
                return false;
            c = w.evidence[i].colour;
        }
        return true;
    };

    auto check_image = [&] {
        if (! w.transform || ! w.search_space.contains("pattern"))
            return;
        std::vector<Point> pattern;
        for (auto & p : w.search_space.at("pattern").at("points"))
            pattern.push_back(Point::from_json(p));
        if (pattern.size() != w.evidence.size()) {
            fail("evidence size differs from pattern size");
            return;
        }
        for (std::size_t i = 0 ; i < pattern.size() ; ++i)
            if ((*w.transform)(pattern[i]) != w.evidence[i].point)
                fail("evidence point " + std::to_string(i) + " is not the image of the pattern point");
    };

    switch (w.kind) {
        case WitnessKind::AMCopy:
            if (! w.origin_index || *w.origin_index >= w.evidence.size())
                fail("AM witness needs a valid origin index");
            else {
                if (! all_same(w.origin_index))
                    fail("points other than the distinguished one are not monochromatic");
                if (all_same(std::nullopt))
                    fail("the whole copy is monochromatic");
            }
            check_image();
            break;

        case WitnessKind::MonoAP:
            if (w.evidence.size() < 2)
                fail("AP evidence needs at least two points");
            else {
                auto step = w.evidence[1].point - w.evidence[0].point;
                for (std::size_t i = 1 ; i < w.evidence.size() ; ++i)
                    if (w.evidence[i].point - w.evidence[i - 1].point != step)
                        fail("evidence points are not equally spaced");
            }
            if (! all_same(std::nullopt))
                fail("AP is not monochromatic");
            break;

        case WitnessKind::MonoHomothet:
            if (! all_same(std::nullopt))
                fail("homothet is not monochromatic");
            if (w.transform && w.transform->scale() <= 0)
                fail("homothet scale is not positive");
            check_image();
            break;

        case WitnessKind::MonoSublattice:
            if (! all_same(std::nullopt))
                fail("sublattice sample is not monochromatic");
            break;

        case WitnessKind::Exhausted:
            if (! w.evidence.empty())
                fail("exhaustion certificate carries evidence");
            break;
    }
    return r;
}
