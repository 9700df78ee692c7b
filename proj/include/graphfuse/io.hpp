#pragma once

#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "graphfuse/dataset.hpp"
#include "graphfuse/errors.hpp"
#include "graphfuse/labels.hpp"
#include "graphfuse/matrix.hpp"

// File formats:
//   FMAT      ASCII header "FMAT1 <rows> <cols>\n" followed by rows*cols
//             little-endian IEEE-754 32-bit floats, row-major.
//   labels    TSV, header "sample_id<TAB>misogynous<TAB>...<TAB>violence",
//             one {0,1} row per sample, LF line endings.
//   manifest  TSV mapping sample_id -> row index in each FMAT file, preceded
//             by "# key<TAB>value" lines declaring d_v, e and M.
//   embedding one token per line followed by whitespace-separated reals.

namespace graphfuse {

namespace detail {

inline std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

inline std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

inline std::ifstream open_input(const std::filesystem::path& path, bool binary) {
    std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
    if (!in) {
        throw ParamError("cannot open file: " + path.string());
    }
    return in;
}

inline std::ofstream open_output(const std::filesystem::path& path, bool binary) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) {
        throw ParamError("cannot write file: " + path.string());
    }
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// FMAT
// ---------------------------------------------------------------------------

/// Reads one FMAT block starting at the current stream position. Values are
/// widened to 64-bit. Byte offsets in errors are relative to the block start.
inline Matrix read_fmat(std::istream& in, const std::string& context) {
    std::string header;
    if (!std::getline(in, header)) {
        throw FormatError(context + ": missing FMAT header");
    }
    std::istringstream hs(header);
    std::string magic;
    std::uint64_t rows = 0, cols = 0;
    if (!(hs >> magic >> rows >> cols) || magic != "FMAT1") {
        throw FormatError(context + ": bad FMAT header \"" + header + "\"");
    }
    std::string extra;
    if (hs >> extra) {
        throw FormatError(context + ": trailing header fields \"" + header + "\"");
    }
    if (rows == 0 || cols == 0) {
        throw FormatError(context + ": empty matrix (" + std::to_string(rows) + "x" +
                          std::to_string(cols) + ")");
    }
    if (rows > (1ULL << 30) || cols > (1ULL << 30) || rows * cols > (1ULL << 30)) {
        throw FormatError(context + ": implausible dimensions " + std::to_string(rows) +
                          "x" + std::to_string(cols));
    }
    const std::size_t header_bytes = header.size() + 1;
    const std::size_t count = static_cast<std::size_t>(rows * cols);
    std::vector<unsigned char> bytes(count * 4);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    const std::size_t got = static_cast<std::size_t>(in.gcount());
    if (got != bytes.size()) {
        throw FormatError(context + ": truncated payload, expected " +
                          std::to_string(bytes.size()) + " bytes, got " +
                          std::to_string(got) + " (at byte offset " +
                          std::to_string(header_bytes + got) + ")");
    }
    Matrix out(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
    for (std::size_t i = 0; i < count; ++i) {
        std::uint32_t word = static_cast<std::uint32_t>(bytes[4 * i]) |
                             static_cast<std::uint32_t>(bytes[4 * i + 1]) << 8 |
                             static_cast<std::uint32_t>(bytes[4 * i + 2]) << 16 |
                             static_cast<std::uint32_t>(bytes[4 * i + 3]) << 24;
        const float value = std::bit_cast<float>(word);
        if (!std::isfinite(value)) {
            throw FormatError(context + ": non-finite value at byte offset " +
                              std::to_string(header_bytes + 4 * i));
        }
        out.values()[i] = static_cast<double>(value);
    }
    return out;
}

inline Matrix read_feature_matrix(const std::filesystem::path& path) {
    std::ifstream in = detail::open_input(path, /*binary=*/true);
    Matrix m = read_fmat(in, path.string());
    char c;
    if (in.get(c)) {
        throw FormatError(path.string() + ": trailing bytes after payload");
    }
    return m;
}

/// Writes one FMAT block. Doubles are narrowed to 32-bit floats.
inline void write_fmat(std::ostream& out, const Matrix& m) {
    if (m.rows() == 0 || m.cols() == 0) {
        throw ParamError("write_fmat: refusing to write empty matrix");
    }
    out << "FMAT1 " << m.rows() << " " << m.cols() << "\n";
    std::vector<unsigned char> bytes(m.size() * 4);
    for (std::size_t i = 0; i < m.size(); ++i) {
        const std::uint32_t word = std::bit_cast<std::uint32_t>(
            static_cast<float>(m.values()[i]));
        bytes[4 * i] = static_cast<unsigned char>(word & 0xff);
        bytes[4 * i + 1] = static_cast<unsigned char>((word >> 8) & 0xff);
        bytes[4 * i + 2] = static_cast<unsigned char>((word >> 16) & 0xff);
        bytes[4 * i + 3] = static_cast<unsigned char>((word >> 24) & 0xff);
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

inline void write_feature_matrix(const std::filesystem::path& path, const Matrix& m) {
    std::ofstream out = detail::open_output(path, /*binary=*/true);
    write_fmat(out, m);
    if (!out) {
        throw ParamError("write failed: " + path.string());
    }
}

// ---------------------------------------------------------------------------
// Labels TSV
// ---------------------------------------------------------------------------

struct LabeledSample {
    std::string sample_id;
    LabelVector labels{};
};

/// check_consistency enforces subtype-implies-misogynous; disable it when
/// reading model predictions, which may legally violate the gate.
inline std::vector<LabeledSample> read_labels(const std::filesystem::path& path,
                                              bool check_consistency = true) {
    std::ifstream in = detail::open_input(path, /*binary=*/false);
    std::string line;
    if (!std::getline(in, line)) {
        throw FormatError(path.string() + ": empty labels file");
    }
    std::string expected_header = "sample_id";
    for (const std::string& name : label_names()) expected_header += "\t" + name;
    if (detail::strip_cr(line) != expected_header) {
        throw FormatError(path.string() + ": bad header, expected \"" + expected_header +
                          "\"");
    }
    std::vector<LabeledSample> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = detail::strip_cr(line);
        if (line.empty()) continue;
        const std::vector<std::string> fields = detail::split_tabs(line);
        if (fields.size() != 1 + kNumLabels) {
            throw FormatError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                              std::to_string(1 + kNumLabels) + " columns, got " +
                              std::to_string(fields.size()));
        }
        LabeledSample sample;
        sample.sample_id = fields[0];
        if (sample.sample_id.empty()) {
            throw FormatError(path.string() + ":" + std::to_string(line_no) +
                              ": empty sample_id");
        }
        for (std::size_t j = 0; j < kNumLabels; ++j) {
            const std::string& cell = fields[j + 1];
            if (cell == "0") {
                sample.labels[j] = 0;
            } else if (cell == "1") {
                sample.labels[j] = 1;
            } else {
                throw FormatError(path.string() + ":" + std::to_string(line_no) +
                                  ": non-binary value \"" + cell + "\" for " +
                                  label_names()[j]);
            }
        }
        if (check_consistency && !labels_consistent(sample.labels)) {
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": subtype label set while misogynous is 0 (sample " +
                            sample.sample_id + ")");
        }
        out.push_back(std::move(sample));
    }
    return out;
}

inline void write_labels(const std::filesystem::path& path,
                         const std::vector<LabeledSample>& samples) {
    std::ofstream out = detail::open_output(path, /*binary=*/true);
    out << "sample_id";
    for (const std::string& name : label_names()) out << "\t" << name;
    out << "\n";
    for (const LabeledSample& s : samples) {
        out << s.sample_id;
        for (std::size_t j = 0; j < kNumLabels; ++j) out << "\t" << s.labels[j];
        out << "\n";
    }
}

// ---------------------------------------------------------------------------
// Manifest TSV
// ---------------------------------------------------------------------------

struct Manifest {
    std::size_t d_v = 0;
    std::size_t e = 0;
    std::size_t regions = 1;
    std::vector<std::pair<std::string, std::size_t>> rows;  // sample_id -> FMAT row
};

inline Manifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in = detail::open_input(path, /*binary=*/false);
    Manifest manifest;
    bool saw_d_v = false, saw_e = false, saw_m = false, saw_header = false;
    std::string line;
    std::size_t line_no = 0;
    std::unordered_set<std::string> seen_ids;
    while (std::getline(in, line)) {
        ++line_no;
        line = detail::strip_cr(line);
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::vector<std::string> fields = detail::split_tabs(line.substr(2));
            if (fields.size() != 2) {
                throw FormatError(path.string() + ":" + std::to_string(line_no) +
                                  ": bad metadata line \"" + line + "\"");
            }
            std::size_t value = 0;
            try {
                value = static_cast<std::size_t>(std::stoull(fields[1]));
            } catch (const std::exception&) {
                throw FormatError(path.string() + ":" + std::to_string(line_no) +
                                  ": non-integer metadata value \"" + fields[1] + "\"");
            }
            if (fields[0] == "d_v") {
                manifest.d_v = value;
                saw_d_v = true;
            } else if (fields[0] == "e") {
                manifest.e = value;
                saw_e = true;
            } else if (fields[0] == "M") {
                manifest.regions = value;
                saw_m = true;
            } else {
                throw FormatError(path.string() + ":" + std::to_string(line_no) +
                                  ": unknown metadata key \"" + fields[0] + "\"");
            }
            continue;
        }
        if (!saw_header) {
            if (line != "sample_id\trow") {
                throw FormatError(path.string() + ":" + std::to_string(line_no) +
                                  ": expected header \"sample_id\\trow\", got \"" + line +
                                  "\"");
            }
            saw_header = true;
            continue;
        }
        const std::vector<std::string> fields = detail::split_tabs(line);
        if (fields.size() != 2 || fields[0].empty()) {
            throw FormatError(path.string() + ":" + std::to_string(line_no) +
                              ": bad manifest row \"" + line + "\"");
        }
        if (!seen_ids.insert(fields[0]).second) {
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": duplicate sample_id " + fields[0]);
        }
        std::size_t row = 0;
        try {
            row = static_cast<std::size_t>(std::stoull(fields[1]));
        } catch (const std::exception&) {
            throw FormatError(path.string() + ":" + std::to_string(line_no) +
                              ": non-integer row index \"" + fields[1] + "\"");
        }
        manifest.rows.emplace_back(fields[0], row);
    }
    if (!saw_d_v || !saw_e || !saw_m) {
        throw FormatError(path.string() + ": manifest must declare d_v, e and M");
    }
    if (manifest.d_v < 1 || manifest.e < 1) {
        throw DataError(path.string() + ": d_v and e must be >= 1");
    }
    if (manifest.rows.empty()) {
        throw DataError(path.string() + ": manifest lists no samples");
    }
    return manifest;
}

inline void write_manifest(const std::filesystem::path& path, const Manifest& manifest) {
    std::ofstream out = detail::open_output(path, /*binary=*/true);
    out << "# d_v\t" << manifest.d_v << "\n";
    out << "# e\t" << manifest.e << "\n";
    out << "# M\t" << manifest.regions << "\n";
    out << "sample_id\trow\n";
    for (const auto& [id, row] : manifest.rows) {
        out << id << "\t" << row << "\n";
    }
}

// ---------------------------------------------------------------------------
// Embeddings
// ---------------------------------------------------------------------------

/// Token -> vector table. Tokens are lowercased on insert and lookup.
class EmbeddingTable {
public:
    EmbeddingTable() = default;
    explicit EmbeddingTable(std::size_t dim) : dim_(dim) {}

    static std::string normalize(const std::string& token) {
        std::string t = token;
        for (char& c : t) {
            c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
        return t;
    }

    void insert(const std::string& token, std::vector<double> vec) {
        if (dim_ == 0) dim_ = vec.size();
        if (vec.size() != dim_) {
            throw FormatError("EmbeddingTable: vector length " + std::to_string(vec.size()) +
                              " for \"" + token + "\", table dimension is " +
                              std::to_string(dim_));
        }
        vectors_.emplace(normalize(token), std::move(vec));
    }

    bool contains(const std::string& token) const {
        return vectors_.count(normalize(token)) > 0;
    }

    const std::vector<double>& lookup(const std::string& token) const {
        const auto it = vectors_.find(normalize(token));
        if (it == vectors_.end()) {
            throw DataError("EmbeddingTable: missing token \"" + token + "\"");
        }
        return it->second;
    }

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return vectors_.size(); }

private:
    std::unordered_map<std::string, std::vector<double>> vectors_;
    std::size_t dim_ = 0;
};

/// Scans a whitespace-separated embedding file for the requested tokens.
/// Missing tokens are a hard error unless zero_fallback is set, in which case
/// a zero vector is substituted and a warning goes to stderr.
inline EmbeddingTable read_embeddings(const std::filesystem::path& path,
                                      const std::vector<std::string>& tokens,
                                      bool zero_fallback = false) {
    std::ifstream in = detail::open_input(path, /*binary=*/false);
    std::unordered_set<std::string> wanted;
    for (const std::string& t : tokens) wanted.insert(EmbeddingTable::normalize(t));
    EmbeddingTable table;
    std::size_t dim = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = detail::strip_cr(line);
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string token;
        ls >> token;
        std::vector<double> vec;
        double value;
        while (ls >> value) vec.push_back(value);
        if (!ls.eof()) {
            throw FormatError(path.string() + ":" + std::to_string(line_no) +
                              ": non-numeric embedding component");
        }
        if (vec.empty()) {
            throw FormatError(path.string() + ":" + std::to_string(line_no) +
                              ": no vector components for token \"" + token + "\"");
        }
        if (dim == 0) {
            dim = vec.size();
        } else if (vec.size() != dim) {
            throw FormatError(path.string() + ":" + std::to_string(line_no) +
                              ": vector length " + std::to_string(vec.size()) +
                              " differs from established dimension " + std::to_string(dim));
        }
        const std::string key = EmbeddingTable::normalize(token);
        if (wanted.count(key) && !table.contains(key)) {
            table.insert(key, std::move(vec));
        }
    }
    for (const std::string& t : tokens) {
        if (table.contains(t)) continue;
        if (!zero_fallback) {
            throw DataError(path.string() + ": missing token \"" + t + "\"");
        }
        std::cerr << "warning: token \"" << t << "\" not found in " << path.string()
                  << ", substituting a zero vector\n";
        table.insert(t, std::vector<double>(dim == 0 ? 1 : dim, 0.0));
    }
    return table;
}

/// Row i is the embedding of names[i]; the node-feature input of the graph
/// classifier.
inline Matrix build_node_features(const EmbeddingTable& table,
                                  const std::array<std::string, kNumLabels>& names) {
    Matrix out(kNumLabels, table.dim());
    for (std::size_t i = 0; i < kNumLabels; ++i) {
        const std::vector<double>& vec = table.lookup(names[i]);
        for (std::size_t j = 0; j < vec.size(); ++j) out(i, j) = vec[j];
    }
    return out;
}

inline void write_embeddings(const std::filesystem::path& path,
                             const std::array<std::string, kNumLabels>& names,
                             const Matrix& vectors) {
    if (vectors.rows() != kNumLabels) {
        throw ShapeError("write_embeddings: expected " + std::to_string(kNumLabels) +
                         " rows, got " + vectors.shape_str());
    }
    std::ofstream out = detail::open_output(path, /*binary=*/true);
    out.precision(17);
    for (std::size_t i = 0; i < vectors.rows(); ++i) {
        out << names[i];
        for (std::size_t j = 0; j < vectors.cols(); ++j) out << " " << vectors(i, j);
        out << "\n";
    }
}

// ---------------------------------------------------------------------------
// Dataset assembly
// ---------------------------------------------------------------------------

struct DatasetPaths {
    std::filesystem::path manifest;
    std::filesystem::path visual;
    std::filesystem::path textual;
    std::filesystem::path labels;
};

/// Loads a dataset in manifest order. Feature rows are selected by the
/// manifest's row indices; every manifest id must carry labels.
inline Dataset load_dataset(const DatasetPaths& paths) {
    const Manifest manifest = read_manifest(paths.manifest);
    const Matrix visual = read_feature_matrix(paths.visual);
    const Matrix textual = read_feature_matrix(paths.textual);
    if (visual.cols() != manifest.d_v) {
        throw DataError(paths.visual.string() + ": has " + std::to_string(visual.cols()) +
                        " columns, manifest declares d_v=" + std::to_string(manifest.d_v));
    }
    if (textual.cols() != manifest.e) {
        throw DataError(paths.textual.string() + ": has " + std::to_string(textual.cols()) +
                        " columns, manifest declares e=" + std::to_string(manifest.e));
    }
    std::unordered_map<std::string, LabelVector> label_map;
    for (const LabeledSample& s : read_labels(paths.labels)) {
        if (!label_map.emplace(s.sample_id, s.labels).second) {
            throw DataError(paths.labels.string() + ": duplicate sample_id " + s.sample_id);
        }
    }
    Dataset ds;
    ds.d_v = manifest.d_v;
    ds.e = manifest.e;
    ds.regions = manifest.regions;
    ds.records.reserve(manifest.rows.size());
    for (const auto& [id, row] : manifest.rows) {
        if (row >= visual.rows() || row >= textual.rows()) {
            throw DataError(paths.manifest.string() + ": row index " + std::to_string(row) +
                            " for sample " + id + " exceeds feature matrix rows");
        }
        const auto it = label_map.find(id);
        if (it == label_map.end()) {
            throw DataError(paths.labels.string() + ": no labels for sample " + id);
        }
        FeatureRecord record;
        record.sample_id = id;
        record.visual.assign(visual.row_ptr(row), visual.row_ptr(row) + visual.cols());
        record.textual.assign(textual.row_ptr(row), textual.row_ptr(row) + textual.cols());
        record.labels = it->second;
        ds.records.push_back(std::move(record));
    }
    return ds;
}

/// Writes a dataset as the four-file layout the loader consumes. Rows are
/// written in record order, so manifest row i maps to FMAT row i.
inline void write_dataset_files(const std::filesystem::path& dir, const Dataset& ds) {
    std::filesystem::create_directories(dir);
    Matrix visual(ds.records.size(), ds.d_v);
    Matrix textual(ds.records.size(), ds.e);
    Manifest manifest;
    manifest.d_v = ds.d_v;
    manifest.e = ds.e;
    manifest.regions = ds.regions;
    std::vector<LabeledSample> labeled;
    for (std::size_t i = 0; i < ds.records.size(); ++i) {
        const FeatureRecord& r = ds.records[i];
        for (std::size_t j = 0; j < ds.d_v; ++j) visual(i, j) = r.visual[j];
        for (std::size_t j = 0; j < ds.e; ++j) textual(i, j) = r.textual[j];
        manifest.rows.emplace_back(r.sample_id, i);
        labeled.push_back({r.sample_id, r.labels});
    }
    write_feature_matrix(dir / "visual.fmat", visual);
    write_feature_matrix(dir / "textual.fmat", textual);
    write_manifest(dir / "manifest.tsv", manifest);
    write_labels(dir / "labels.tsv", labeled);
}

inline DatasetPaths dataset_paths_in(const std::filesystem::path& dir) {
    return DatasetPaths{dir / "manifest.tsv", dir / "visual.fmat", dir / "textual.fmat",
                        dir / "labels.tsv"};
}

}  // namespace graphfuse
