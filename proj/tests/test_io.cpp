#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "finop/cli.hpp"
#include "finop/io.hpp"
#include "finop/rng.hpp"

using namespace finop;

namespace {

std::string data_path(const std::string& name) {
    return std::string(FINOP_TEST_DATA_DIR) + "/" + name;
}

// run the CLI in-process, capturing stdout
struct CliResult {
    int exit_code;
    std::string out;
    std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

json strip_timestamp(const std::string& text) {
    json j = json::parse(text);
    j.erase("timestamp");
    return j;
}

}  // namespace

TEST_CASE("matrix JSON round trip", "[io]") {
    Rng rng(3);
    const Matrix m = rng.gaussian_matrix(3, 2);
    const Matrix back = matrix_from_json(matrix_to_json(m));
    CHECK((back - m).max_abs() == 0.0);

    // real matrices may abbreviate entries as plain numbers
    const json j = json::parse(R"({"rows":2,"cols":2,"data":[1, 2, [0,1], -0.5]})");
    const Matrix parsed = matrix_from_json(j);
    CHECK(parsed(0, 0) == cplx(1.0));
    CHECK(parsed(1, 0) == cplx(0.0, 1.0));
    CHECK(parsed(1, 1) == cplx(-0.5));
    // real entries serialize back to plain numbers
    CHECK(matrix_to_json(parsed)["data"][0].is_number());
    CHECK(matrix_to_json(parsed)["data"][2].is_array());

    CHECK_THROWS_AS(matrix_from_json(json::parse(R"({"rows":2,"cols":2,"data":[1]})")), error);
}

TEST_CASE("spectral data and cpmap JSON round trips", "[io]") {
    const Matrix a(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 2});
    const SpectralData s = spectral_decompose(a);
    const SpectralData back = spectral_from_json(spectral_to_json(s));
    CHECK(back.eigenvalues == s.eigenvalues);
    CHECK(back.multiplicities == s.multiplicities);
    for (std::size_t k = 0; k < s.projections.size(); ++k)
        CHECK((back.projections[k] - s.projections[k]).max_abs() == 0.0);

    const CPMap dephase = CPMap::from_kraus(
        2, 2, {Matrix(2, 2, {1, 0, 0, 0}), Matrix(2, 2, {0, 0, 0, 1})});
    const CPMap back_map = cpmap_from_json(cpmap_to_json(dephase));
    CHECK((back_map.superoperator() - dephase.superoperator()).max_abs() == 0.0);
}

TEST_CASE("group JSON round trip", "[io]") {
    const FiniteGroup g = heisenberg_group(2);
    const FiniteGroup back = group_from_json(group_to_json(g));
    CHECK(back.order == g.order);
    CHECK(back.mult == g.mult);
    CHECK(back.labels == g.labels);
}

TEST_CASE("cp verify flags the transpose map", "[io]") {
    const CliResult r = run_cli({"cp", "verify", "--choi", data_path("transpose2.json")});
    CHECK(r.exit_code == 1);
    const json report = json::parse(r.out);
    CHECK(report["pass"] == false);
    CHECK(report["results"]["min_choi_eigenvalue"].get<double>() ==
          Catch::Approx(-1.0).margin(1e-9));
}

TEST_CASE("spectral decompose reports the multiplicities", "[io]") {
    const CliResult r =
        run_cli({"spectral", "decompose", "--matrix", data_path("diag112.json")});
    CHECK(r.exit_code == 0);
    const json report = json::parse(r.out);
    CHECK(report["pass"] == true);
    CHECK(report["results"]["multiplicities"] == json::array({1, 2}));
}

TEST_CASE("extension subcommand emits the promised schema", "[io]") {
    const CliResult r = run_cli({"extension", "--grid", "128", "--theta", "0"});
    CHECK(r.exit_code == 0);
    const json report = json::parse(r.out);
    CHECK(report["results"]["d_plus"] == 1);
    CHECK(report["results"]["d_minus"] == 1);
    const auto eigs = report["results"]["eigenvalues"].get<std::vector<double>>();
    double best = 1e300;
    for (double v : eigs) best = std::min(best, std::abs(v));
    CHECK(best < 1e-3);
}

TEST_CASE("brownian subcommand checks the spectrum", "[io]") {
    const CliResult r = run_cli({"brownian", "--grid", "128", "--modes", "8"});
    CHECK(r.exit_code == 0);
    const json report = json::parse(r.out);
    CHECK(report["pass"] == true);
    const auto eigs = report["results"]["eigenvalues"].get<std::vector<double>>();
    CHECK(eigs.size() == 8);
    CHECK(eigs[0] == Catch::Approx(0.405285).margin(1e-3));
}

TEST_CASE("wavelet subcommand emits the exact matrix", "[io]") {
    const CliResult r = run_cli({"wavelet", "mt-matrix", "--level", "2"});
    CHECK(r.exit_code == 0);
    const json report = json::parse(r.out);
    CHECK(report["pass"] == true);
    CHECK(report["results"]["size"] == 8);
    const Matrix m = matrix_from_json(report["results"]["matrix"]);
    CHECK(std::real(m(0, 0)) == 0.5);
    CHECK(std::real(m(0, 1)) == -0.25);
}

TEST_CASE("group dft and haar-check subcommands", "[io]") {
    const std::string tmp = "/tmp/finop_dft_input.json";
    {
        std::ofstream f(tmp);
        f << "[1, 0, 0, 0]";
    }
    const CliResult r = run_cli({"group", "dft", "--input", tmp});
    CHECK(r.exit_code == 0);
    const json report = json::parse(r.out);
    for (const auto& entry : report["results"]["transform"])
        CHECK(entry[0].get<double>() == Catch::Approx(0.5));

    const CliResult haar = run_cli({"group", "haar-check", "--a", "2", "--b", "1"});
    CHECK(haar.exit_code == 0);
    const json haar_report = json::parse(haar.out);
    CHECK(haar_report["results"]["modular"].get<double>() == 0.5);
}

TEST_CASE("group induce subcommand on Z4", "[io]") {
    const std::string gfile = "/tmp/finop_z4.json";
    const std::string rfile = "/tmp/finop_sign.json";
    {
        std::ofstream f(gfile);
        f << group_to_json(cyclic_group(4)).dump();
    }
    {
        std::ofstream f(rfile);
        f << R"([{"rows":1,"cols":1,"data":[1]},{"rows":1,"cols":1,"data":[-1]}])";
    }
    const CliResult r = run_cli(
        {"group", "induce", "--group", gfile, "--subgroup", "0,2", "--rep", rfile});
    CHECK(r.exit_code == 0);
    const json report = json::parse(r.out);
    CHECK(report["results"]["dim"] == 2);
    CHECK(report["pass"] == true);
}

TEST_CASE("gns subcommand builds the triple from files", "[io]") {
    const std::string afile = "/tmp/finop_algebra.json";
    const std::string sfile = "/tmp/finop_state.json";
    {
        std::ofstream f(afile);
        f << algebra_to_json(StarAlgebra::full(2)).dump();
    }
    {
        std::ofstream f(sfile);
        f << R"({"density":{"rows":2,"cols":2,"data":[1,0,0,0]}})";
    }
    const CliResult r = run_cli({"gns", "--algebra", afile, "--state", sfile});
    CHECK(r.exit_code == 0);
    const json report = json::parse(r.out);
    CHECK(report["results"]["rep_dim"] == 2);
    CHECK(report["results"]["pure"] == true);
    CHECK(report["pass"] == true);
}

TEST_CASE("commutant subcommand reports the block dimension", "[io]") {
    const std::string gfile = "/tmp/finop_gens.json";
    {
        std::ofstream f(gfile);
        f << R"([{"rows":3,"cols":3,"data":[1,0,0, 0,1,0, 0,0,2]}])";
    }
    const CliResult r = run_cli({"commutant", "--generators", gfile});
    CHECK(r.exit_code == 0);
    const json report = json::parse(r.out);
    CHECK(report["results"]["dimension"] == 5);
    CHECK(report["results"]["is_abelian"] == false);
    CHECK(report["results"]["matrix_block_size"].is_null());
}

TEST_CASE("reports are deterministic apart from the timestamp", "[io]") {
    const std::vector<std::string> args = {"brownian", "--grid",  "64",     "--modes", "8",
                                           "--paths",  "100",    "--seed", "7",
                                           "--cov-check"};
    const CliResult a = run_cli(args);
    const CliResult b = run_cli(args);
    CHECK(strip_timestamp(a.out) == strip_timestamp(b.out));
    // a different seed changes the digest-relevant content? the digest covers
    // argv, so it must differ
    std::vector<std::string> other = args;
    other[8] = "8";
    const CliResult c = run_cli(other);
    CHECK(strip_timestamp(a.out) != strip_timestamp(c.out));
}

TEST_CASE("report invariant: pass equals residual <= tol", "[io]") {
    const CliResult r = run_cli({"cp", "verify", "--choi", data_path("transpose2.json")});
    const json report = json::parse(r.out);
    for (const auto& check : report["residuals"])
        CHECK(check["pass"].get<bool>() ==
              (check["residual"].get<double>() <= check["tol"].get<double>()));
}

TEST_CASE("parse errors exit with code 2", "[io]") {
    const CliResult missing = run_cli({"spectral", "decompose", "--matrix", "/nonexistent.json"});
    CHECK(missing.exit_code == 2);
    CHECK_FALSE(missing.err.empty());

    const CliResult bad_flag = run_cli({"spectral", "decompose"});
    CHECK(bad_flag.exit_code == 2);

    const CliResult no_sub = run_cli({});
    CHECK(no_sub.exit_code == 2);

    // validation failure: non-Hermitian matrix
    const std::string tmp = "/tmp/finop_nonherm.json";
    {
        std::ofstream f(tmp);
        f << R"({"rows":2,"cols":2,"data":[0,1,0,0]})";
    }
    const CliResult nonherm = run_cli({"spectral", "decompose", "--matrix", tmp});
    CHECK(nonherm.exit_code == 2);
}

TEST_CASE("emitted JSON re-parses to the same values", "[io]") {
    const CliResult r =
        run_cli({"spectral", "decompose", "--matrix", data_path("diag112.json")});
    const json report = json::parse(r.out);
    const SpectralData s = spectral_from_json(report["results"]);
    const json again = spectral_to_json(s);
    CHECK(again == report["results"]);
}
