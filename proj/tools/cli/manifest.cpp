#include "manifest.hpp"

#include <chrono>
#include <ostream>
#include <system_error>

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <openssl/evp.h>

#include "failsim/error.hpp"

namespace failsim::cli
{

std::string sha256_hex(std::string_view bytes)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1)
        throw Error("sha256: OpenSSL digest failed");
    std::string hex;
    hex.reserve(2 * length);
    for (unsigned int i = 0; i < length; ++i)
        hex += fmt::format("{:02x}", digest[i]);
    return hex;
}

std::string utc_timestamp()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(now));
}

void RunManifest::write(std::ostream& out) const
{
    auto join = [](const std::vector<std::string>& items, const char* sep) {
        std::string text;
        for (std::size_t i = 0; i < items.size(); ++i)
            text += (i ? sep : "") + items[i];
        return text;
    };
    out << "tool_version=" << tool_version << '\n'
        << "subcommand=" << subcommand << '\n'
        << "arguments=" << join(arguments, " ") << '\n'
        << "config_sha256=" << config_digest << '\n'
        << "seed=" << seed << '\n'
        << "replications=" << replications << '\n'
        << "timestamp=" << timestamp << '\n'
        << "outputs=" << join(outputs, ",") << '\n';
}

OutputDir::OutputDir(std::filesystem::path root) : root_(std::move(root))
{
    std::error_code ec;
    if (!std::filesystem::exists(root_, ec))
    {
        std::filesystem::create_directories(root_);
        created_ = true;
    }
    else if (!std::filesystem::is_directory(root_))
        throw Error(fmt::format("output path {} is not a directory", root_.string()));
}

OutputDir::~OutputDir()
{
    if (committed_)
        return;
    std::error_code ec; // best effort; never throw from here
    for (const auto& name : files_)
        std::filesystem::remove(root_ / name, ec);
    if (created_ && std::filesystem::is_empty(root_, ec))
        std::filesystem::remove(root_, ec);
}

std::ofstream OutputDir::open(const std::string& name)
{
    files_.push_back(name);
    std::ofstream out(root_ / name, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(fmt::format("cannot write {}", (root_ / name).string()));
    return out;
}

} // namespace failsim::cli
