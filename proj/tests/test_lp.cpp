#include "vrpsd/lp.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace vrpsd;

TEST_CASE("single bound LP with its dual") {
    LinearModel m;
    m.add_variable({-kInf, kInf, 1.0, false, "x"});
    int r = m.add_row({{0}, {1.0}, Sense::Ge, 3.0, "lb"});
    CHECK(m.find_row("lb") == r);
    CHECK(m.find_row("none") == -1);
    SolveOutcome out = solve_lp(m);
    REQUIRE(out.status == SolveStatus::Optimal);
    CHECK(out.primal[0] == doctest::Approx(3.0));
    CHECK(out.row_duals[r] == doctest::Approx(1.0));
    CHECK(out.objective == doctest::Approx(3.0));
}

TEST_CASE("dual signs follow row senses and reconstruct the objective") {
    // min 2a + 3b + c  s.t.  a + b >= 4,  b + c <= 5,  a - c = 1,  0 <= a <= 2
    LinearModel m;
    m.add_variable({0.0, 2.0, 2.0, false, "a"});
    m.add_variable({0.0, kInf, 3.0, false, "b"});
    m.add_variable({0.0, kInf, 1.0, false, "c"});
    m.add_row({{0, 1}, {1, 1}, Sense::Ge, 4.0, ""});
    m.add_row({{1, 2}, {1, 1}, Sense::Le, 5.0, ""});
    m.add_row({{0, 2}, {1, -1}, Sense::Eq, 1.0, ""});
    SolveOutcome out = solve_lp(m);
    REQUIRE(out.status == SolveStatus::Optimal);
    CHECK(out.row_duals[0] >= -1e-9);
    CHECK(out.row_duals[1] <= 1e-9);
    double dual_obj = 0.0;
    for (int i = 0; i < m.num_rows(); i++)
        dual_obj += m.rows()[i].rhs * out.row_duals[i];
    for (int j = 0; j < m.num_variables(); j++) {
        const Variable &v = m.variables()[j];
        double rc = out.col_duals[j];
        if (rc > 1e-9)
            dual_obj += rc * v.lb;
        else if (rc < -1e-9)
            dual_obj += rc * v.ub;
    }
    CHECK(dual_obj == doctest::Approx(out.objective).epsilon(1e-6));
    for (int i = 0; i < m.num_rows(); i++)
        CHECK(std::abs(out.row_duals[i] * m.rows()[i].violation(out.primal)) <= 1e-6);
}

TEST_CASE("recourse LP on the four-customer route") {
    // Subroute inequalities for demands (4,4,4,8), capacity 10.
    std::vector<long long> d{4, 4, 4, 8};
    std::vector<double> w{2, 2, 6, 2};
    LinearModel m;
    for (double wi : w)
        m.add_variable({0.0, 1.0, wi, false, ""});
    for (int i = 0; i < 4; i++) {
        long long load = 0;
        for (int j = i; j < 4; j++) {
            load += d[j];
            long long need = (load + 9) / 10 - 1;
            if (need <= 0)
                continue;
            Row r;
            for (int k = i; k <= j; k++) {
                r.idx.push_back(k);
                r.val.push_back(1.0);
            }
            r.rhs = double(need);
            m.add_row(r);
        }
    }
    SolveOutcome out = solve_lp(m);
    REQUIRE(out.status == SolveStatus::Optimal);
    CHECK(out.objective == doctest::Approx(4.0));
}

TEST_CASE("infeasible LP") {
    LinearModel m;
    m.add_variable({0.0, kInf, 1.0, false, ""});
    m.add_row({{0}, {1.0}, Sense::Ge, 3.0, ""});
    m.add_row({{0}, {1.0}, Sense::Le, 2.0, ""});
    CHECK(solve_lp(m).status == SolveStatus::Infeasible);
}

TEST_CASE("lazy loop") {
    // max a + b over integers in [0,3]^2; the verifier only admits a + b <= 4
    // and then a <= 1.
    auto make = [] {
        LinearModel m;
        m.add_variable({0.0, 3.0, -1.0, true, "a"});
        m.add_variable({0.0, 3.0, -1.0, true, "b"});
        return m;
    };

    SUBCASE("clean model needs one solve") {
        LinearModel m = make();
        SolveOutcome out = solve_mip_with_lazy(m, [](const std::vector<double> &) { return std::vector<Row>{}; });
        CHECK(out.status == SolveStatus::Optimal);
        CHECK(out.rounds == 1);
        CHECK(out.objective == doctest::Approx(-6.0));
    }
    SUBCASE("rows are added until the verifier is silent") {
        LinearModel m = make();
        auto verify = [](const std::vector<double> &x) {
            std::vector<Row> rows;
            if (x[0] + x[1] > 4.5)
                rows.push_back({{0, 1}, {1, 1}, Sense::Le, 4.0, "sum"});
            else if (x[0] > 1.5)
                rows.push_back({{0}, {1}, Sense::Le, 1.0, "a"});
            return rows;
        };
        SolveOutcome out = solve_mip_with_lazy(m, verify);
        CHECK(out.status == SolveStatus::Optimal);
        CHECK(out.objective == doctest::Approx(-4.0));
        CHECK(out.primal[0] <= 1.0 + 1e-9);
        CHECK(out.rounds <= 3);
        CHECK(m.num_rows() == out.rounds - 1);
    }
    SUBCASE("satisfied rows break the contract") {
        LinearModel m = make();
        auto verify = [](const std::vector<double> &) {
            return std::vector<Row>{{{0}, {1}, Sense::Le, 10.0, "slack"}};
        };
        CHECK_THROWS_AS(solve_mip_with_lazy(m, verify), ContractViolation);
    }
    SUBCASE("infeasible MIP") {
        LinearModel m = make();
        m.add_row({{0, 1}, {1, 1}, Sense::Ge, 7.0, ""});
        auto out = solve_mip_with_lazy(m, [](const std::vector<double> &) { return std::vector<Row>{}; });
        CHECK(out.status == SolveStatus::Infeasible);
    }
}

TEST_CASE("model dump") {
    LinearModel m;
    m.add_variable({0.0, 1.0, 1.0, false, "x"});
    m.add_row({{0}, {1.0}, Sense::Ge, 0.5, ""});
    auto path = std::filesystem::temp_directory_path() / "vrpsd_lp_dump_test.lp";
    write_lp_file(m, path.string());
    std::ifstream in(path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(text.find("x") != std::string::npos);
    std::filesystem::remove(path);
}
