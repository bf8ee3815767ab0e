#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace failsim::cli
{

/// Lower-case hex SHA-256 of `bytes`.
std::string sha256_hex(std::string_view bytes);

/// key=value record written next to the CSVs of one run.
struct RunManifest
{
    std::string tool_version;
    std::string subcommand;
    std::vector<std::string> arguments;
    std::string config_digest; ///< "none" when the command takes no config
    std::uint64_t seed = 0;
    std::size_t replications = 0;
    std::string timestamp; ///< UTC, ISO 8601
    std::vector<std::string> outputs;

    void write(std::ostream& out) const;
};

std::string utc_timestamp();

/**
 * Output directory for one run. Files opened through it are remembered; unless
 * commit() is called, the destructor deletes them, and the directory too when
 * this run created it and it is left empty.
 */
class OutputDir
{
  public:
    explicit OutputDir(std::filesystem::path root);
    ~OutputDir();

    OutputDir(const OutputDir&) = delete;
    OutputDir& operator=(const OutputDir&) = delete;

    std::ofstream open(const std::string& name);
    const std::vector<std::string>& files() const { return files_; }
    const std::filesystem::path& root() const { return root_; }

    void commit() { committed_ = true; }

  private:
    std::filesystem::path root_;
    bool created_ = false;
    bool committed_ = false;
    std::vector<std::string> files_;
};

} // namespace failsim::cli
