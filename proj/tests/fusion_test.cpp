#include <gtest/gtest.h>

#include <vector>

#include "graphfuse/fusion.hpp"
#include "graphfuse/rng.hpp"

using graphfuse::fuse;
using graphfuse::FusedFeature;
using graphfuse::Matrix;
using graphfuse::project;
using graphfuse::ProjectionParams;

TEST(FusionTest, LambdaEndpoints) {
    const std::vector<double> f_v = {1.0, -2.0, 3.0};
    const std::vector<double> f_t = {4.0, 5.0};

    const FusedFeature at0 = fuse(f_v, f_t, 0.0);
    EXPECT_EQ(at0.vector, (std::vector<double>{1.0, -2.0, 3.0, 0.0, 0.0}));

    const FusedFeature at1 = fuse(f_v, f_t, 1.0);
    EXPECT_EQ(at1.vector, (std::vector<double>{0.0, 0.0, 0.0, 4.0, 5.0}));
}

TEST(FusionTest, MidpointExample) {
    const FusedFeature f = fuse({2.0, -2.0}, {4.0}, 0.5);
    EXPECT_EQ(f.vector, (std::vector<double>{1.0, -1.0, 2.0}));
    EXPECT_DOUBLE_EQ(f.lambda_used, 0.5);
}

TEST(FusionTest, LambdaOutOfRange) {
    EXPECT_THROW(fuse({1.0}, {1.0}, -0.1), graphfuse::ParamError);
    EXPECT_THROW(fuse({1.0}, {1.0}, 1.5), graphfuse::ParamError);
}

TEST(FusionTest, LinearInEachStream) {
    graphfuse::Rng rng(8);
    std::vector<double> f_v(6), f_t(4);
    for (double& v : f_v) v = rng.uniform(-1, 1);
    for (double& v : f_t) v = rng.uniform(-1, 1);
    const double lambda = 0.3;
    const double a = 2.5;

    std::vector<double> f_v_scaled = f_v;
    for (double& v : f_v_scaled) v *= a;
    const FusedFeature base = fuse(f_v, f_t, lambda);
    const FusedFeature scaled = fuse(f_v_scaled, f_t, lambda);
    for (std::size_t i = 0; i < 6; ++i) {
        EXPECT_DOUBLE_EQ(scaled.vector[i], a * base.vector[i]);
    }
    for (std::size_t i = 6; i < 10; ++i) {
        EXPECT_DOUBLE_EQ(scaled.vector[i], base.vector[i]);
    }
    EXPECT_EQ(base.vector.size(), f_v.size() + f_t.size());
}

TEST(FusionTest, ProjectIdentityAndZero) {
    FusedFeature f;
    f.vector = {1.0, 2.0, 3.0};
    ProjectionParams identity{Matrix::identity(3), Matrix(1, 3)};
    EXPECT_EQ(project(f, identity), f.vector);

    ProjectionParams zero{Matrix(2, 3), Matrix{{5.0, -1.0}}};
    EXPECT_EQ(project(f, zero), (std::vector<double>{5.0, -1.0}));
}

TEST(FusionTest, ProjectExample) {
    FusedFeature f;
    f.vector = {3.0, 4.0};
    ProjectionParams p{Matrix{{1, 1}, {0, 2}}, Matrix{{0.0, 1.0}}};
    EXPECT_EQ(project(f, p), (std::vector<double>{7.0, 9.0}));
}

TEST(FusionTest, ProjectShapeError) {
    FusedFeature f;
    f.vector = {1.0, 2.0, 3.0};
    ProjectionParams p{Matrix(2, 2), Matrix(1, 2)};
    EXPECT_THROW(project(f, p), graphfuse::ShapeError);
}
