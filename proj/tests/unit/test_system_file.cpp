#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "mapoi/errors.hpp"
#include "mapoi/system_file.hpp"

using namespace mapoi;

namespace {

HamiltonianParams parse(const std::string& text) { return parse_system(KeyValueDocument::parse(text, "sys")); }

double at(const HamiltonianParams& h, MatrixTag tag, int p, int q) {
    return h.values[ParamIndex(h.dimension).index_of(tag, p - 1, q - 1)];
}

}  // namespace

TEST(SystemFile, BlockForm) {
    const HamiltonianParams h = parse(
        "[system]\ndimension = 3\nunits = rad/ps\n"
        "[hamiltonian]\n1 1 = 0\n2 2 = 10\n3 2 = 0.5\n"
        "[dipole]\n1 2 = 2\n");
    ASSERT_EQ(h.dimension, 3);
    ASSERT_EQ(h.size(), 9u);
    EXPECT_EQ(at(h, MatrixTag::Hamiltonian, 2, 2), 10.0);
    EXPECT_EQ(at(h, MatrixTag::Hamiltonian, 2, 3), 0.5);
    EXPECT_EQ(at(h, MatrixTag::Dipole, 1, 2), 2.0);
    EXPECT_EQ(at(h, MatrixTag::Dipole, 2, 3), 0.0);
}

TEST(SystemFile, FlatForm) {
    const HamiltonianParams h = parse("[system]\ndimension = 2\nh = 1 2 3 4\n");
    EXPECT_EQ(h.values, (std::vector<double>{1, 2, 3, 4}));
}

TEST(SystemFile, Errors) {
    EXPECT_THROW(parse("[system]\n"), ConfigError);
    EXPECT_THROW(parse("[system]\ndimension = 1\n"), ConfigError);
    EXPECT_THROW(parse("[system]\ndimension = 2\nunits = eV\n"), ConfigError);
    EXPECT_THROW(parse("[system]\ndimension = 2\nh = 1 2 3\n"), ConfigError);
    EXPECT_THROW(parse("[system]\ndimension = 2\n[dipole]\n1 1 = 3\n"), ConfigError);
    EXPECT_THROW(parse("[system]\ndimension = 2\n[hamiltonian]\n1 3 = 3\n"), ConfigError);
    EXPECT_THROW(parse("[system]\ndimension = 2\nh = 1 2 3 4\n[hamiltonian]\n1 1 = 3\n"), ConfigError);
    EXPECT_THROW(parse("[system]\ndimension = 2\ncolour = red\n"), ConfigError);
    try {
        parse("[system]\ndimension = 2\n\n[dipole]\n1 1 = 3\n");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("sys:5:"), std::string::npos) << e.what();
    }
}

TEST(SystemFile, FormatRoundTripIsExact) {
    HamiltonianParams h = ladder_system();
    h.values[3] = 1.0 / 3.0;
    h.values[40] = -std::sqrt(2.0);
    const HamiltonianParams back = parse(format_system(h, "two\nline comment"));
    EXPECT_EQ(back.values, h.values);
}

TEST(SystemFile, LadderValues) {
    const HamiltonianParams h = ladder_system();
    ASSERT_EQ(h.size(), 64u);
    for (int p = 1; p <= 8; ++p) {
        EXPECT_DOUBLE_EQ(at(h, MatrixTag::Hamiltonian, p, p), 150.0 * (p - 1) - 2.0 * (p - 1) * p);
        for (int q = p + 1; q <= 8; ++q) {
            EXPECT_DOUBLE_EQ(at(h, MatrixTag::Hamiltonian, p, q), 4.0 * std::pow(0.5, q - p - 1));
            const double mu = q == p + 1 ? 6.0 * std::sqrt(p) : q == p + 2 ? 0.9 * std::sqrt(p) : 0.0;
            EXPECT_DOUBLE_EQ(at(h, MatrixTag::Dipole, p, q), mu);
        }
    }
}

TEST(SystemFile, BundledFileEqualsLadder) {
    const HamiltonianParams h = load_system(std::filesystem::path(MAPOI_CONFIG_DIR) / "vibrational8.system");
    EXPECT_EQ(h.dimension, 8);
    EXPECT_EQ(h.values, ladder_system().values);
}
