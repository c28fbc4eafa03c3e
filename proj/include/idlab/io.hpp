#pragma once

// Artifact output: CSV tables, atomic writes, git-style content hashes and
// flat binary fields with a JSON sidecar.

#include "idlab/field.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace idlab {

/// Shortest decimal text that round-trips to the same double; "nan", "inf"
/// and "-inf" for non-finite values.
std::string format_number(double v);

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    CsvTable& row();  ///< starts a new row
    CsvTable& add(double v);
    CsvTable& add(int v);
    CsvTable& add(std::size_t v);
    CsvTable& add(bool pass);  ///< "pass" / "fail"
    CsvTable& add(std::string_view s);

    [[nodiscard]] std::string str() const;
    [[nodiscard]] std::size_t n_rows() const noexcept { return rows_.size(); }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Writes to a temporary sibling and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

/// SHA-1 of "blob <size>\0<content>", as computed by git hash-object.
std::string git_blob_hash(std::string_view content);

/// `path` holds levels x nodes little-endian float64 values; `path`.json holds
/// the axes, time stamps and layout.
void write_field(const std::filesystem::path& path, const FieldST& field);
FieldST read_field(const std::filesystem::path& path);

/// Writes `path`.FAILED with the message, next to any partial artifact.
void write_failed_marker(const std::filesystem::path& path, std::string_view message);

} // namespace idlab
