#include <gtest/gtest.h>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "graphfuse/io.hpp"
#include "graphfuse/rng.hpp"
#include "graphfuse/synthetic.hpp"

namespace fs = std::filesystem;
using graphfuse::Matrix;

namespace {

class IoTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("graphfuse_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path file(const std::string& name) const { return dir_ / name; }

    void write_bytes(const fs::path& path, const std::string& bytes) {
        std::ofstream out(path, std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    }

    void write_text(const fs::path& path, const std::string& text) {
        write_bytes(path, text);
    }

    fs::path dir_;
};

// Encodes a float32 little-endian by hand, independent of the library writer.
std::string le_float(float v) {
    std::uint32_t word;
    std::memcpy(&word, &v, 4);
    std::string out(4, '\0');
    out[0] = static_cast<char>(word & 0xff);
    out[1] = static_cast<char>((word >> 8) & 0xff);
    out[2] = static_cast<char>((word >> 16) & 0xff);
    out[3] = static_cast<char>((word >> 24) & 0xff);
    return out;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_F(IoTest, FmatDirectEncoding) {
    std::string bytes = "FMAT1 2 3\n";
    for (float v : {1.f, 2.f, 3.f, 4.f, 5.f, 6.f}) bytes += le_float(v);
    write_bytes(file("m.fmat"), bytes);
    const Matrix m = graphfuse::read_feature_matrix(file("m.fmat"));
    const Matrix expected{{1, 2, 3}, {4, 5, 6}};
    EXPECT_EQ(m, expected);
}

TEST_F(IoTest, FmatRoundTripIsBitExact) {
    graphfuse::Rng rng(77);
    Matrix m(13, 9);
    // values representable in 32 bits so the widen/narrow round trip is exact
    for (double& v : m.values()) v = static_cast<double>(static_cast<float>(rng.normal()));
    graphfuse::write_feature_matrix(file("rt.fmat"), m);
    EXPECT_EQ(graphfuse::read_feature_matrix(file("rt.fmat")), m);

    // writing what was read reproduces the file bytes exactly
    graphfuse::write_feature_matrix(file("rt2.fmat"),
                                    graphfuse::read_feature_matrix(file("rt.fmat")));
    EXPECT_EQ(read_file(file("rt.fmat")), read_file(file("rt2.fmat")));
}

TEST_F(IoTest, FmatRejectsZeroRows) {
    write_bytes(file("z.fmat"), "FMAT1 0 3\n");
    EXPECT_THROW(graphfuse::read_feature_matrix(file("z.fmat")), graphfuse::FormatError);
}

TEST_F(IoTest, FmatRejectsBadMagic) {
    write_bytes(file("bad.fmat"), "FMAX1 1 1\n" + le_float(1.f));
    EXPECT_THROW(graphfuse::read_feature_matrix(file("bad.fmat")), graphfuse::FormatError);
}

TEST_F(IoTest, FmatTruncationErrorNamesByteOffset) {
    std::string bytes = "FMAT1 1 2\n" + le_float(1.f);  // one float short
    write_bytes(file("short.fmat"), bytes);
    try {
        graphfuse::read_feature_matrix(file("short.fmat"));
        FAIL() << "expected FormatError";
    } catch (const graphfuse::FormatError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("truncated"), std::string::npos) << msg;
        EXPECT_NE(msg.find("byte offset 14"), std::string::npos) << msg;  // 10 header + 4 payload
    }
}

TEST_F(IoTest, FmatRejectsNonFinitePayload) {
    const float inf = std::numeric_limits<float>::infinity();
    write_bytes(file("inf.fmat"), "FMAT1 1 2\n" + le_float(1.f) + le_float(inf));
    try {
        graphfuse::read_feature_matrix(file("inf.fmat"));
        FAIL() << "expected FormatError";
    } catch (const graphfuse::FormatError& e) {
        EXPECT_NE(std::string(e.what()).find("byte offset 14"), std::string::npos) << e.what();
    }
}

TEST_F(IoTest, FmatRejectsTrailingBytes) {
    write_bytes(file("trail.fmat"), "FMAT1 1 1\n" + le_float(1.f) + "x");
    EXPECT_THROW(graphfuse::read_feature_matrix(file("trail.fmat")), graphfuse::FormatError);
}

TEST_F(IoTest, LabelsParse) {
    write_text(file("labels.tsv"),
               "sample_id\tmisogynous\tshaming\tstereotype\tobjectification\tviolence\n"
               "m1\t1\t0\t1\t0\t0\n"
               "m2\t0\t0\t0\t0\t0\n");
    const auto samples = graphfuse::read_labels(file("labels.tsv"));
    ASSERT_EQ(samples.size(), 2u);
    EXPECT_EQ(samples[0].sample_id, "m1");
    EXPECT_EQ(samples[0].labels, (graphfuse::LabelVector{1, 0, 1, 0, 0}));
    EXPECT_EQ(samples[1].labels, (graphfuse::LabelVector{0, 0, 0, 0, 0}));
}

TEST_F(IoTest, LabelsRejectNonBinaryWithRowNumber) {
    write_text(file("labels.tsv"),
               "sample_id\tmisogynous\tshaming\tstereotype\tobjectification\tviolence\n"
               "m1\t1\t0\t0\t0\t0\n"
               "m2\t2\t0\t0\t0\t0\n");
    try {
        graphfuse::read_labels(file("labels.tsv"));
        FAIL() << "expected FormatError";
    } catch (const graphfuse::FormatError& e) {
        EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos) << e.what();
    }
}

TEST_F(IoTest, LabelsRejectInconsistentSubtype) {
    write_text(file("labels.tsv"),
               "sample_id\tmisogynous\tshaming\tstereotype\tobjectification\tviolence\n"
               "m1\t0\t1\t0\t0\t0\n");
    EXPECT_THROW(graphfuse::read_labels(file("labels.tsv")), graphfuse::DataError);
    // prediction files may violate the gate
    const auto preds = graphfuse::read_labels(file("labels.tsv"), /*check_consistency=*/false);
    EXPECT_EQ(preds[0].labels, (graphfuse::LabelVector{0, 1, 0, 0, 0}));
}

TEST_F(IoTest, LabelsRejectBadHeader) {
    write_text(file("labels.tsv"), "sample_id\tmisogynist\ts\ts\to\tv\nm1\t1\t0\t0\t0\t0\n");
    EXPECT_THROW(graphfuse::read_labels(file("labels.tsv")), graphfuse::FormatError);
}

TEST_F(IoTest, ManifestRoundTrip) {
    graphfuse::Manifest manifest;
    manifest.d_v = 8;
    manifest.e = 4;
    manifest.regions = 2;
    manifest.rows = {{"a", 0}, {"b", 2}, {"c", 1}};
    graphfuse::write_manifest(file("manifest.tsv"), manifest);
    const graphfuse::Manifest back = graphfuse::read_manifest(file("manifest.tsv"));
    EXPECT_EQ(back.d_v, 8u);
    EXPECT_EQ(back.e, 4u);
    EXPECT_EQ(back.regions, 2u);
    EXPECT_EQ(back.rows, manifest.rows);
}

TEST_F(IoTest, ManifestRejectsDuplicateIdsAndMissingMetadata) {
    write_text(file("dup.tsv"), "# d_v\t4\n# e\t2\n# M\t1\nsample_id\trow\na\t0\na\t1\n");
    EXPECT_THROW(graphfuse::read_manifest(file("dup.tsv")), graphfuse::DataError);
    write_text(file("nometa.tsv"), "sample_id\trow\na\t0\n");
    EXPECT_THROW(graphfuse::read_manifest(file("nometa.tsv")), graphfuse::FormatError);
}

TEST_F(IoTest, EmbeddingsParseAndCaseInsensitivity) {
    write_text(file("emb.txt"),
               "Violence 0.1 0.2 0.3\n"
               "other 1 1 1\n"
               "shaming -1 0 1\n");
    const auto table = graphfuse::read_embeddings(file("emb.txt"), {"violence", "shaming"});
    EXPECT_EQ(table.dim(), 3u);
    EXPECT_EQ(table.lookup("VIOLENCE"), (std::vector<double>{0.1, 0.2, 0.3}));
    EXPECT_EQ(table.lookup("shaming"), (std::vector<double>{-1, 0, 1}));
}

TEST_F(IoTest, EmbeddingsRejectInconsistentLengths) {
    write_text(file("emb.txt"), "a 1 2 3\nb 1 2\n");
    EXPECT_THROW(graphfuse::read_embeddings(file("emb.txt"), {"a"}), graphfuse::FormatError);
}

TEST_F(IoTest, EmbeddingsMissingTokenErrorAndFallback) {
    write_text(file("emb.txt"), "a 1 2\n");
    try {
        graphfuse::read_embeddings(file("emb.txt"), {"a", "missing"});
        FAIL() << "expected DataError";
    } catch (const graphfuse::DataError& e) {
        EXPECT_NE(std::string(e.what()).find("missing"), std::string::npos);
    }
    const auto table =
        graphfuse::read_embeddings(file("emb.txt"), {"a", "missing"}, /*zero_fallback=*/true);
    EXPECT_EQ(table.lookup("missing"), (std::vector<double>{0, 0}));
}

TEST_F(IoTest, NodeFeaturesFollowLabelOrder) {
    std::string text;
    for (const std::string& name : graphfuse::label_names()) {
        text += name + " 1 " + std::to_string(name.size()) + "\n";
    }
    write_text(file("emb.txt"), text);
    std::vector<std::string> tokens(graphfuse::label_names().begin(),
                                    graphfuse::label_names().end());
    const auto table = graphfuse::read_embeddings(file("emb.txt"), tokens);
    const Matrix nodes = graphfuse::build_node_features(table, graphfuse::label_names());
    ASSERT_EQ(nodes.rows(), 5u);
    ASSERT_EQ(nodes.cols(), 2u);
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_DOUBLE_EQ(nodes(i, 1), static_cast<double>(graphfuse::label_names()[i].size()));
    }
}

TEST_F(IoTest, DatasetRoundTripPreservesOrderAndValues) {
    graphfuse::SyntheticConfig cfg;
    cfg.seed = 5;
    cfg.n = 40;
    cfg.d_v = 6;
    cfg.e = 3;
    graphfuse::Dataset ds = graphfuse::gen_synthetic(cfg);
    // keep values exactly representable in 32 bits for the bit-exact check
    for (auto& r : ds.records) {
        for (double& v : r.visual) v = static_cast<double>(static_cast<float>(v));
        for (double& v : r.textual) v = static_cast<double>(static_cast<float>(v));
    }
    graphfuse::write_dataset_files(dir_, ds);
    const graphfuse::Dataset back = graphfuse::load_dataset(graphfuse::dataset_paths_in(dir_));
    ASSERT_EQ(back.size(), ds.size());
    EXPECT_EQ(graphfuse::id_sequence_hash(back), graphfuse::id_sequence_hash(ds));
    for (std::size_t i = 0; i < ds.size(); ++i) {
        EXPECT_EQ(back.records[i].sample_id, ds.records[i].sample_id);
        EXPECT_EQ(back.records[i].visual, ds.records[i].visual);
        EXPECT_EQ(back.records[i].textual, ds.records[i].textual);
        EXPECT_EQ(back.records[i].labels, ds.records[i].labels);
    }
}

TEST_F(IoTest, DatasetLoaderValidatesShapesAndCoverage) {
    graphfuse::SyntheticConfig cfg;
    cfg.seed = 6;
    cfg.n = 12;
    cfg.d_v = 4;
    cfg.e = 2;
    graphfuse::Dataset ds = graphfuse::gen_synthetic(cfg);
    graphfuse::write_dataset_files(dir_, ds);

    // d_v mismatch
    auto paths = graphfuse::dataset_paths_in(dir_);
    graphfuse::Manifest manifest = graphfuse::read_manifest(paths.manifest);
    manifest.d_v = 5;
    graphfuse::write_manifest(paths.manifest, manifest);
    EXPECT_THROW(graphfuse::load_dataset(paths), graphfuse::DataError);

    // row index out of range
    manifest.d_v = 4;
    manifest.rows[0].second = 99;
    graphfuse::write_manifest(paths.manifest, manifest);
    EXPECT_THROW(graphfuse::load_dataset(paths), graphfuse::DataError);

    // missing labels for a manifest id
    manifest.rows[0].second = 0;
    manifest.rows[0].first = "not_in_labels";
    graphfuse::write_manifest(paths.manifest, manifest);
    EXPECT_THROW(graphfuse::load_dataset(paths), graphfuse::DataError);
}

TEST_F(IoTest, MissingFileIsParamError) {
    EXPECT_THROW(graphfuse::read_feature_matrix(file("nope.fmat")), graphfuse::ParamError);
    EXPECT_THROW(graphfuse::read_labels(file("nope.tsv")), graphfuse::ParamError);
}
