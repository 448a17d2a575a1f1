// Prints closed-form and brute-force curvature for the bundled Lie algebra examples and
// optionally writes their decomposition files.
#include "solitonlab/lie_oracle.hpp"
#include "solitonlab/soliton_systems.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace solitonlab;

namespace {

void report(const char* name, const oracle::HomogeneousSpace& space, const std::vector<double>& x) {
    const auto dec = oracle::extract_decomposition(space);
    const auto closed = geometry::ricci_eigenvalues(dec, geometry::ScalingVector{x});
    const auto brute = oracle::brute_ricci_eigenvalues(space, x);
    std::printf("%s\n  scalar  closed %.17g  brute %.17g\n", name, geometry::scalar_curvature(dec, geometry::ScalingVector{x}),
                oracle::brute_scalar_curvature(space, x));
    for (std::size_t i = 0; i < closed.size(); ++i) {
        std::printf("  r_%zu     closed %.17g  brute %.17g\n", i, closed[i], brute[i]);
    }
}

void write(const std::filesystem::path& p, const geometry::IsotropyDecomposition& dec) {
    std::ofstream(p) << geometry::to_json(dec).dump(2) << '\n';
    std::printf("wrote %s\n", p.c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"curvature oracle"};
    std::string dir;
    app.add_option("--write", dir, "write decomposition files into this directory");
    CLI11_PARSE(app, argc, argv);

    report("su2+su2, two factors, x = (1, 2)", oracle::su2_su2_product(), {1.0, 2.0});
    report("su2+su2, Berger split, x = (0.5, 1.5, 2)", oracle::su2_su2_berger(), {0.5, 1.5, 2.0});
    report("su2+su2 / U(1), x = (1, 3)", oracle::su2_su2_circle(), {1.0, 3.0});

    const auto hopf = oracle::sp1_sp2_hopf();
    auto dec = oracle::extract_decomposition(hopf);
    const auto raw = two_summands_from_decomposition(dec);
    // rescale b so that the fibre is a round sphere of curvature one: A1 = d1 (d1 - 1)
    const double lambda = raw.A1 / (raw.d1 * (raw.d1 - 1.0));
    auto normalized = oracle::rescale_b(dec, lambda);
    normalized.normalization = "b = -B_g / " + std::to_string(lambda) + ", fibre of sectional curvature one";
    const auto a = two_summands_from_decomposition(normalized);
    std::printf("sp(1)+sp(2) over sp(1)+sp(1)+sp(1): d1 = %d, d2 = %d, A1 = %.17g, A2 = %.17g, A3 = %.17g\n", a.d1, a.d2,
                a.A1, a.A2, a.A3);

    if (!dir.empty()) {
        std::filesystem::create_directories(dir);
        write(std::filesystem::path(dir) / "su2_su2_product.json", oracle::extract_decomposition(oracle::su2_su2_product()));
        write(std::filesystem::path(dir) / "su2_su2_berger.json", oracle::extract_decomposition(oracle::su2_su2_berger()));
        write(std::filesystem::path(dir) / "sp1_sp2_hopf.json", normalized);
    }
    return 0;
}
