#include <amc/digest.hh>
#include <amc/rational.hh>

#include <openssl/evp.h>
#include <zlib.h>

#include <array>
#include <memory>

using namespace amc;

auto amc::sha256_hex(std::string_view data) -> std::string
{
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx{EVP_MD_CTX_new(), &EVP_MD_CTX_free};
    std::array<unsigned char, EVP_MAX_MD_SIZE> md;
    unsigned len = 0;
    if (! ctx
            || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1
            || EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1
            || EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1)
        throw Error{"sha256 failed"};

    static const char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0 ; i < len ; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xf];
    }
    return out;
}

auto amc::json_digest(const nlohmann::json & j) -> std::string
{
    return sha256_hex(j.dump());
}

auto amc::write_gz(const std::string & path, std::string_view data) -> void
{
    gzFile f = gzopen(path.c_str(), "wb9");
    if (! f)
        throw Error{"cannot open '" + path + "' for writing"};
    std::size_t done = 0;
    while (done < data.size()) {
        unsigned chunk = static_cast<unsigned>(std::min<std::size_t>(data.size() - done, 1u << 20));
        if (gzwrite(f, data.data() + done, chunk) != static_cast<int>(chunk)) {
            gzclose(f);
            throw Error{"write to '" + path + "' failed"};
        }
        done += chunk;
    }
    if (gzclose(f) != Z_OK)
        throw Error{"closing '" + path + "' failed"};
}

auto amc::read_gz(const std::string & path) -> std::string
{
    gzFile f = gzopen(path.c_str(), "rb");
    if (! f)
        throw Error{"cannot open '" + path + "'"};
    std::string out;
    std::array<char, 1 << 16> buf;
    int n;
    while ((n = gzread(f, buf.data(), buf.size())) > 0)
        out.append(buf.data(), n);
    gzclose(f);
    if (n < 0)
        throw Error{"corrupt gzip stream in '" + path + "'"};
    return out;
}
