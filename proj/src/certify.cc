#include <amc/colouring.hh>

using namespace amc;

namespace
{
    /// Smallest i >= 0 with K^i (K - 1) > t.
    auto geometric_crossover(const Integer & K, const Integer & t) -> Integer
    {
        Integer i{0}, width = K - 1;
        while (width <= t) {
            width *= K;
            ++i;
        }
        return i;
    }

    auto shell_certificate(const std::string & kind, const Integer & K, nlohmann::json params, const std::string & step) -> ShellCertificate
    {
        ShellCertificate c;
        c.kind = kind;
        c.ap_free = true;
        c.inequality = "K^i (K - 1) > " + step;
        c.crossover = "i0(t) = min { i >= 0 : K^i (K - 1) > t }; ceil(log_K t) + 1 is an upper bound";
        c.parameters = std::move(params);
        c.crossover_index = [K] (const Integer & t) { return geometric_crossover(K, t); };
        return c;
    }
}

auto ShellCertificate::to_json() const -> nlohmann::json
{
    return {
        {"schema", "amc-lab/certificate/v1"},
        {"kind", kind},
        {"ap_free", ap_free},
        {"inequality", inequality},
        {"crossover", crossover},
        {"parameters", parameters}
    };
}

auto amc::certify_shell_ap_free(const Colouring & colouring) -> ShellCertificate
{
    if (auto s = dynamic_cast<const ShellColouring1D *>(&colouring)) {
        nlohmann::json params = {{"K", s->K().get_str()}};
        if (s->variant() == ShellVariant::Stepped)
            params["L"] = s->L().get_str();
        // alternating shells [K^i, K^(i+1)) have width K^i (K-1); the stepped pieces
        // inside [L K^i, L K^(i+1)) have the same width
        auto c = shell_certificate(s->kind(), s->K(), params, "t");
        c.inequality = s->variant() == ShellVariant::Alternating
            ? "shell width K^i (K - 1) > t, so an AP with difference t visits consecutive shells [K^i, K^(i+1)) of both parities"
            : "piece width K^i (K - 1) > t, so an AP with difference t visits every piece and the colour sets of odd and even shells are disjoint";
        return c;
    }

    if (auto c = dynamic_cast<const ConeShellColouring *>(&colouring)) {
        nlohmann::json params = {{"K", c->K().get_str()}, {"L", c->L().get_str()}, {"dimension", c->dimension()},
            {"alpha", c->alpha()}, {"cones", c->partition().cone_count()}};
        auto cert = shell_certificate("cone", c->K(), params, "t");
        cert.inequality = "piece width K^i (K - 1) > t where t is the l1 step of the projected AP; an AP eventually stays in one cone and its l1 norms form an AP";
        return cert;
    }

    if (dynamic_cast<const MondrianColouring *>(&colouring) || dynamic_cast<const FibreColouring *>(&colouring)) {
        ShellCertificate c;
        c.kind = colouring.kind();
        c.ap_free = true;
        c.inequality = "square ring Q_i \\ Q_(i-1) has width 3 * 4^(i-2) > |t|_inf, so an AP with difference t meets rings of both parities";
        c.crossover = "i0(t) = min { i >= 2 : 3 * 4^(i-2) > |t|_inf }";
        c.parameters = {{"squares", "[-4^i, 4^(i-1)]^2"}};
        c.crossover_index = [] (const Integer & t) {
            Integer i{2}, width{3};
            while (width <= t) {
                width *= 4;
                ++i;
            }
            return i;
        };
        return c;
    }

    if (auto b = dynamic_cast<const BlockColouring *>(&colouring)) {
        Integer period{std::to_string(2 * b->block())};
        ShellCertificate c;
        c.kind = "block";
        c.ap_free = false;
        c.inequality = "an AP with difference t not divisible by 2D changes colour within 2D / gcd(t, 2D) <= 2D terms; differences divisible by 2D give monochromatic APs";
        c.crossover = "run(t) = 2D / gcd(t, 2D), 0 when 2D divides t";
        c.parameters = {{"D", b->block()}};
        c.crossover_index = [period] (const Integer & t) {
            Integer g;
            mpz_gcd(g.get_mpz_t(), t.get_mpz_t(), period.get_mpz_t());
            if (g == period)
                return Integer{0};
            return Integer{period / g};
        };
        return c;
    }

    if (auto r = dynamic_cast<const ReflectedColouring *>(&colouring))
        return certify_shell_ap_free(*r->inner());

    if (auto u = dynamic_cast<const DisjointUnionColouring *>(&colouring)) {
        ShellCertificate c;
        c.kind = u->to_json().value("kind", "disjoint");
        c.ap_free = true;
        c.inequality = "palettes are disjoint, so a monochromatic AP lies in one part; each part is certified separately";
        c.crossover = "max over parts";
        auto parts = nlohmann::json::array();
        std::vector<ShellCertificate> subs;
        for (auto & p : u->parts()) {
            subs.push_back(certify_shell_ap_free(*p));
            parts.push_back(subs.back().to_json());
            c.ap_free = c.ap_free && subs.back().ap_free;
        }
        c.parameters = {{"parts", parts}};
        c.crossover_index = [subs] (const Integer & t) {
            Integer m{0};
            for (auto & s : subs)
                m = std::max(m, s.crossover_index(t));
            return m;
        };
        return c;
    }

    throw Error{"colouring kind '" + colouring.kind() + "' is not certifiable"};
}
