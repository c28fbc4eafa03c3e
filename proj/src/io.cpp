#include "idlab/io.hpp"

#include "idlab/error.hpp"

#include "json.hpp"

#include <openssl/evp.h>

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace idlab {

using nlohmann::json;

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::row() {
    rows_.emplace_back();
    return *this;
}

CsvTable& CsvTable::add(double v) { return add(std::string_view(format_number(v))); }
CsvTable& CsvTable::add(int v) { return add(std::string_view(std::to_string(v))); }
CsvTable& CsvTable::add(std::size_t v) { return add(std::string_view(std::to_string(v))); }
CsvTable& CsvTable::add(bool pass) { return add(std::string_view(pass ? "pass" : "fail")); }

CsvTable& CsvTable::add(std::string_view s) {
    IDLAB_REQUIRE(!rows_.empty(), "CsvTable::add: call row() first");
    std::string cell(s);
    if (cell.find_first_of(",\"\n") != std::string::npos) {
        std::string q = "\"";
        for (char c : cell) {
            if (c == '"') q += '"';
            q += c;
        }
        cell = q + "\"";
    }
    rows_.back().push_back(std::move(cell));
    return *this;
}

std::string CsvTable::str() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!f) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

std::string git_blob_hash(std::string_view content) {
    const std::string head = "blob " + std::to_string(content.size()) + '\0';
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    const bool ok = ctx && EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                    EVP_DigestUpdate(ctx, head.data(), head.size()) == 1 &&
                    EVP_DigestUpdate(ctx, content.data(), content.size()) == 1 &&
                    EVP_DigestFinal_ex(ctx, md, &len) == 1;
    EVP_MD_CTX_free(ctx);
    if (!ok) throw std::runtime_error("SHA-1 digest failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

namespace {

std::filesystem::path sidecar(const std::filesystem::path& path) {
    std::filesystem::path s = path;
    s += ".json";
    return s;
}

const char* bc_name(BoundaryKind k) { return k == BoundaryKind::Dirichlet ? "dirichlet" : "neumann"; }

} // namespace

void write_field(const std::filesystem::path& path, const FieldST& field) {
    static_assert(std::endian::native == std::endian::little, "field.bin is written in native little-endian order");
    const auto data = field.data();
    std::string bytes(data.size() * sizeof(double), '\0');
    std::memcpy(bytes.data(), data.data(), bytes.size());
    const Grid& g = field.grid();
    const Domain& d = g.domain();
    json meta;
    meta["format"] = "float64-le";
    meta["layout"] = "level-major; node index j * nx + i";
    meta["n_levels"] = field.n_levels();
    meta["nx"] = g.xs().size();
    meta["ny"] = g.ys().size();
    meta["xs"] = std::vector<double>(g.xs().begin(), g.xs().end());
    meta["ys"] = std::vector<double>(g.ys().begin(), g.ys().end());
    meta["times"] = std::vector<double>(field.times().begin(), field.times().end());
    meta["domain"] = {{"dim", d.dim},
                      {"xbar", {d.xbar.x, d.xbar.y}},
                      {"eps0", d.eps0},
                      {"T", d.T},
                      {"bc_labels", {bc_name(d.bc[0]), bc_name(d.bc[1]), bc_name(d.bc[2]), bc_name(d.bc[3])}}};
    meta["sha1"] = git_blob_hash(bytes);
    write_atomic(path, bytes);
    write_atomic(sidecar(path), meta.dump(2) + "\n");
}

FieldST read_field(const std::filesystem::path& path) {
    const json meta = json::parse(read_file(sidecar(path)));
    const std::string bytes = read_file(path);
    Domain d;
    const json& jd = meta.at("domain");
    d.dim = jd.at("dim").get<int>();
    d.xbar = {jd.at("xbar").at(0).get<double>(), jd.at("xbar").at(1).get<double>(), 0.0};
    d.eps0 = jd.at("eps0").get<double>();
    d.T = jd.at("T").get<double>();
    for (std::size_t e = 0; e < 4; ++e) {
        d.bc[e] = jd.at("bc_labels").at(e).get<std::string>() == "neumann" ? BoundaryKind::Neumann
                                                                              : BoundaryKind::Dirichlet;
    }
    auto grid = std::make_shared<const Grid>(d, meta.at("xs").get<std::vector<double>>(),
                                             meta.at("ys").get<std::vector<double>>());
    FieldST f(grid, meta.at("times").get<std::vector<double>>());
    if (bytes.size() != f.data().size() * sizeof(double)) {
        throw std::runtime_error(path.string() + ": size does not match the sidecar");
    }
    for (std::size_t n = 0; n < f.n_levels(); ++n) {
        auto lv = f.level(n);
        std::memcpy(lv.data(), bytes.data() + n * lv.size() * sizeof(double), lv.size() * sizeof(double));
    }
    return f;
}

void write_failed_marker(const std::filesystem::path& path, std::string_view message) {
    std::filesystem::path marker = path;
    marker += ".FAILED";
    write_atomic(marker, std::string("FAILED: ") + std::string(message) + "\n");
}

} // namespace idlab
