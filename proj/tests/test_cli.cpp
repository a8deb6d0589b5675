#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "support.hpp"

using namespace nccalc;

namespace {

const std::string kBin = NCCALC_CLI_PATH;
const std::string kTmp = NCCALC_TEST_TMPDIR;

int run(const std::string& args, const std::string& stdout_file = "") {
    std::string cmd = kBin + " " + args;
    if (!stdout_file.empty()) cmd += " > " + stdout_file;
    cmd += " 2> " + kTmp + "/stderr.txt";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

}  // namespace

TEST_CASE("cli eval: X1*X1 at sigma_x gives the identity") {
    const std::string point = kTmp + "/sx.json";
    save_json_file(point, mat_to_json(ncs::sigma_x()));
    const std::string out = kTmp + "/eval_out.json";
    REQUIRE(run("eval -e \"X1*X1\" -d 1 --point " + point, out) == 0);
    const CMat result = mat_from_json(load_json_file(out));
    CHECK(frob_dist(result, CMat::identity(2)) <= 1e-14);
}

TEST_CASE("cli eval: constant expression scales the identity") {
    const std::string point = kTmp + "/p3.json";
    save_json_file(point, mat_to_json(RandomStream(1).gaussian(3)));
    const std::string out = kTmp + "/eval_c.json";
    REQUIRE(run("eval -e \"2+0i\" -d 1 --point " + point, out) == 0);
    CHECK(frob_dist(mat_from_json(load_json_file(out)), CMat::scalar(3, 2.0)) == 0.0);
}

TEST_CASE("cli exit codes") {
    const std::string point = kTmp + "/sx.json";
    save_json_file(point, mat_to_json(ncs::sigma_x()));

    CHECK(run("eval -e \"X1 +\" --point " + point) == 2);  // parse error

    const std::string bad = kTmp + "/bad.json";
    write_file(bad, "{not json");
    CHECK(run("eval -e \"X1\" --point " + bad) == 4);  // malformed JSON

    const std::string neg = kTmp + "/neg.json";
    save_json_file(neg, mat_to_json(-CMat::identity(2)));
    CHECK(run("eval -e \"sqrtm(X1)\" --point " + neg) == 3);  // outside the PSD domain

    const std::string dir = kTmp + "/dir.json";
    save_json_file(dir, mat_to_json(RandomStream(2).gaussian(2)));
    CHECK(run("derive -e \"sqrtm(X1'X1)\" --method alg --point " + point + " --dir " + dir) == 5);
}

TEST_CASE("cli derive: both methods agree on X^2") {
    const std::string point = kTmp + "/dp.json";
    const std::string dir = kTmp + "/dd.json";
    RandomStream st(3);
    save_json_file(point, mat_to_json(st.gaussian(3)));
    save_json_file(dir, mat_to_json(st.gaussian(3)));
    const std::string out = kTmp + "/derive.json";
    REQUIRE(run("derive -e \"X1 X1\" --method both --point " + point + " --dir " + dir, out) == 0);
    const json j = load_json_file(out);
    CHECK(j.at("inter_method_residual").get<double>() <= 1e-6);
}

TEST_CASE("cli check cr: pass and fail with exit codes") {
    const std::string out = kTmp + "/cr.json";
    CHECK(run("--sizes 2,3 --samples 5 --seed 7 check cr -u \"A1 A1 - B1 B1\" -v "
              "\"A1 B1 + B1 A1\"",
              out) == 0);
    const json good = load_json_file(out);
    CHECK(good.at("verdict") == "pass");
    CHECK(good.at("seed") == 7);

    CHECK(run("--sizes 2 --samples 3 --seed 7 check cr -u \"A1 A1\" -v \"0\"", out) == 1);
    const json bad = load_json_file(out);
    CHECK(bad.at("verdict") == "fail");
    // every sample records a witness
    CHECK(!bad.at("samples").empty());
    CHECK(bad.at("samples").at(0).contains("witness"));
}

TEST_CASE("cli check axioms: the adjoint example fails NC-iii on cnc only") {
    const std::string out = kTmp + "/ax.json";
    CHECK(run("--sizes 2 --samples 4 --seed 5 check axioms -e \"X1'\" --space cnc", out) == 1);
    const json j = load_json_file(out);
    int sim_fail = 0, other_fail = 0;
    for (const auto& r : j.at("reports")) {
        if (r.at("verdict") == "fail") {
            if (r.at("check") == "similarity") ++sim_fail;
            else ++other_fail;
        }
    }
    CHECK(sim_fail > 0);
    CHECK(other_fail == 0);

    CHECK(run("--sizes 2 --samples 4 --seed 5 check axioms -e \"X1'\" --space hnc", out) == 0);
}

TEST_CASE("cli reconstruct: verdicts") {
    const std::string out = kTmp + "/rec.json";
    CHECK(run("--sizes 2 --samples 3 --seed 11 reconstruct -u \"A1 A1 - B1 B1\" -v "
              "\"A1 B1 + B1 A1\"",
              out) == 0);
    CHECK(load_json_file(out).at("nc_function") == "yes");

    CHECK(run("--sizes 2 --samples 3 --seed 11 reconstruct -u \"A1 A1\" -v \"0\"", out) == 1);
    const json j = load_json_file(out);
    CHECK(j.at("nc_function") == "no");
    CHECK(j.at("failing_law") == "cauchy_riemann");
}

TEST_CASE("cli decompose at a Hermitian point") {
    json point;
    point["A"] = tuple_to_json(MatTuple({ncs::sigma_x()}));
    point["B"] = tuple_to_json(MatTuple({ncs::sigma_z()}));
    const std::string pfile = kTmp + "/hp.json";
    save_json_file(pfile, point);
    const std::string out = kTmp + "/dec.json";
    REQUIRE(run("decompose -e \"X1 X1\" --point " + pfile, out) == 0);
    const json j = load_json_file(out);
    CHECK(mat_from_json(j.at("u")).frob() <= 1e-14);
    CHECK(mat_from_json(j.at("v")).frob() <= 1e-14);
    CHECK(j.at("roundtrip_residual").get<double>() <= 1e-14);
}

TEST_CASE("cli reports are byte-identical across reruns") {
    const std::string a = kTmp + "/det_a.json", b = kTmp + "/det_b.json";
    const std::string cmd = "--sizes 2,3 --samples 4 --seed 42 check axioms -e \"X1 X1\"";
    REQUIRE(run(cmd, a) == 0);
    REQUIRE(run(cmd, b) == 0);
    const std::string sa = slurp(a), sb = slurp(b);
    REQUIRE(!sa.empty());
    CHECK(sa == sb);
}

TEST_CASE("cli config file supplies defaults, flags override") {
    const std::string cfg = kTmp + "/nccalc.cfg";
    write_file(cfg, "seed=42\nsamples=4\nsizes=2,3\n");
    const std::string a = kTmp + "/cfg_a.json", b = kTmp + "/cfg_b.json";
    REQUIRE(run("--config " + cfg + " check axioms -e \"X1 X1\"", a) == 0);
    REQUIRE(run("--sizes 2,3 --samples 4 --seed 42 check axioms -e \"X1 X1\"", b) == 0);
    CHECK(slurp(a) == slurp(b));

    // explicit flag wins over the file
    const std::string c = kTmp + "/cfg_c.json", d = kTmp + "/cfg_d.json";
    REQUIRE(run("--config " + cfg + " --seed 43 check axioms -e \"X1 X1\"", c) == 0);
    REQUIRE(run("--sizes 2,3 --samples 4 --seed 43 check axioms -e \"X1 X1\"", d) == 0);
    CHECK(slurp(c) == slurp(d));
    CHECK(slurp(c) != slurp(a));
}
