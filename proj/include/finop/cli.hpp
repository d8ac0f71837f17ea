#pragma once

#include <chrono>
#include <cmath>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "finop/grid_operator.hpp"
#include "finop/io.hpp"

namespace finop::cli {

// One named verification inside a report: pass == (residual <= tol).
struct Check {
    std::string name;
    double residual = 0.0;
    double tol = 0.0;

    bool pass() const { return residual <= tol; }
};

class Report {
  public:
    Report(std::string command, std::string digest)
        : command_(std::move(command)), digest_(std::move(digest)) {}

    json& results() { return results_; }

    void add_check(const std::string& name, double residual, double tol) {
        checks_.push_back({name, residual, tol});
    }

    bool all_pass() const {
        for (const Check& c : checks_)
            if (!c.pass()) return false;
        return true;
    }

    json to_json() const {
        json j;
        j["schema"] = "finop-report/1";
        j["command"] = command_;
        j["inputs_digest"] = digest_;
        j["timestamp"] = timestamp();
        j["results"] = results_;
        json residuals = json::array();
        for (const Check& c : checks_) {
            json r;
            r["name"] = c.name;
            r["residual"] = c.residual;
            r["tol"] = c.tol;
            r["pass"] = c.pass();
            residuals.push_back(std::move(r));
        }
        j["residuals"] = std::move(residuals);
        j["pass"] = all_pass();
        return j;
    }

  private:
    static std::string timestamp() {
        const auto now = std::chrono::system_clock::now();
        const std::time_t t = std::chrono::system_clock::to_time_t(now);
        char buf[32];
        std::tm tm_utc{};
        gmtime_r(&t, &tm_utc);
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
        return buf;
    }

    std::string command_;
    std::string digest_;
    json results_;
    std::vector<Check> checks_;
};

namespace detail {

inline std::string digest_of(const std::vector<std::string>& args,
                             const std::vector<std::string>& input_files) {
    Digest d;
    for (const std::string& a : args) d.feed(a).feed("\x1f");
    for (const std::string& f : input_files) {
        std::ifstream in(f, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        d.feed(buf.str()).feed("\x1e");
    }
    return d.hex();
}

inline int emit(const Report& report, bool quiet, std::ostream& out) {
    if (!quiet) out << report.to_json().dump(2) << "\n";
    return report.all_pass() ? 0 : 1;
}

}  // namespace detail

// Options shared by every subcommand.
struct Common {
    double tol = 1e-8;
    std::uint64_t seed = 1;
    bool quiet = false;
};

// ---- subcommand bodies ------------------------------------------------------

inline int run_spectral(const std::string& matrix_file, double group_tol, const Common& common,
                        const std::vector<std::string>& args, std::ostream& out) {
    const Matrix a = matrix_from_json(file_to_json(matrix_file));
    const SpectralData s = spectral_decompose(a, group_tol);

    Report report("spectral decompose", detail::digest_of(args, {matrix_file}));
    report.results() = spectral_to_json(s);

    report.add_check("reconstruction", (reconstruct(s) - a).max_abs(), common.tol);
    double axiom = 0.0;
    Matrix sum = Matrix::zero(a.rows(), a.rows());
    for (std::size_t i = 0; i < s.projections.size(); ++i) {
        const Matrix& p = s.projections[i];
        axiom = std::max(axiom, (p * p - p).max_abs());
        axiom = std::max(axiom, (p - p.adjoint()).max_abs());
        sum = sum + p;
        for (std::size_t j = i + 1; j < s.projections.size(); ++j)
            axiom = std::max(axiom, (p * s.projections[j]).max_abs());
    }
    axiom = std::max(axiom, (sum - Matrix::identity(a.rows())).max_abs());
    report.add_check("pvm_axioms", axiom, common.tol);
    return detail::emit(report, common.quiet, out);
}

inline int run_gns(const std::string& algebra_file, const std::string& state_file,
                   const Common& common, const std::vector<std::string>& args, std::ostream& out) {
    State s;
    s.algebra = algebra_from_json(file_to_json(algebra_file));
    s.density = matrix_from_json(file_to_json(state_file).at("density"));
    const GnsTriple g = gns_construct(s);

    Report report("gns", detail::digest_of(args, {algebra_file, state_file}));
    report.results()["rep_dim"] = g.rep_dim;
    report.results()["omega"] = matrix_to_json(g.omega_column());
    report.results()["gram"] = matrix_to_json(g.gram);
    report.results()["pi"] = matrix_list_to_json(g.pi);
    const PurityReport purity = is_pure(s);
    report.results()["pure"] = purity.pure;

    double identity_residual = 0.0;
    for (std::size_t i = 0; i < s.algebra.basis.size(); ++i)
        identity_residual =
            std::max(identity_residual, std::abs(s(s.algebra.basis[i]) - gns_expectation(g, i)));
    report.add_check("state_identity", identity_residual, common.tol);

    Matrix orbit(g.rep_dim, s.algebra.basis.size());
    const Matrix om = g.omega_column();
    for (std::size_t k = 0; k < s.algebra.basis.size(); ++k) {
        const Matrix v = g.pi[k] * om;
        for (std::size_t i = 0; i < g.rep_dim; ++i) orbit(i, k) = v(i, 0);
    }
    report.add_check("cyclicity_rank_defect",
                     static_cast<double>(g.rep_dim - rank(orbit, 1e-8)), 0.0);
    return detail::emit(report, common.quiet, out);
}

inline int run_commutant(const std::string& generators_file, const Common& common,
                         const std::vector<std::string>& args, std::ostream& out) {
    const std::vector<Matrix> gens = matrix_list_from_json(file_to_json(generators_file));
    const CommutantReport rep = commutant(gens);

    Report report("commutant", detail::digest_of(args, {generators_file}));
    report.results() = commutant_to_json(rep);

    double defect = 0.0;
    for (const Matrix& x : rep.basis)
        for (const Matrix& gmat : gens) defect = std::max(defect, (x * gmat - gmat * x).max_abs());
    report.add_check("commutation", defect, common.tol);
    return detail::emit(report, common.quiet, out);
}

inline int run_cp_verify(const std::optional<std::string>& choi_file,
                         const std::optional<std::string>& kraus_file, std::size_t in_dim,
                         std::size_t out_dim, const Common& common,
                         const std::vector<std::string>& args, std::ostream& out) {
    CPMap map = [&] {
        if (choi_file) {
            const json j = file_to_json(*choi_file);
            if (j.contains("choi") || j.contains("kraus")) return cpmap_from_json(j);
            const Matrix c = matrix_from_json(j);
            if (in_dim == 0) raise(errc::parse_error, "--in-dim required for a bare Choi matrix");
            return CPMap::from_choi(in_dim, out_dim ? out_dim : c.rows() / in_dim, c);
        }
        const json j = file_to_json(*kraus_file);
        if (j.contains("kraus")) return cpmap_from_json(j);
        const auto ks = matrix_list_from_json(j);
        return CPMap::from_kraus(ks.front().cols(), ks.front().rows(), ks);
    }();

    Report report("cp verify",
                  detail::digest_of(args, {choi_file ? *choi_file : *kraus_file}));
    const double min_eig = min_choi_eigenvalue(map);
    report.results()["in_dim"] = map.in_dim();
    report.results()["out_dim"] = map.out_dim();
    report.results()["min_choi_eigenvalue"] = min_eig;
    report.results()["unital"] = map.is_unital();
    const bool cp = is_completely_positive(map, Tolerance{1e-9, 1e-9});
    report.results()["completely_positive"] = cp;
    report.add_check("choi_positive", std::max(0.0, -min_eig), 1e-9);

    if (cp) {
        const auto kraus = kraus_from_choi(map.choi(), map.in_dim(), map.out_dim());
        report.results()["kraus_rank"] = kraus.size();
        const CPMap rebuilt = CPMap::from_kraus(map.in_dim(), map.out_dim(), kraus);
        report.add_check("kraus_choi_round_trip",
                         (rebuilt.superoperator() - map.superoperator()).max_abs(), common.tol);
        if (map.is_unital() && map.in_dim() == map.out_dim()) {
            const StinespringDilation d = stinespring(map);
            report.results()["stinespring_rank"] = d.rank;
            double comp = 0.0;
            for (std::size_t i = 0; i < map.in_dim(); ++i)
                for (std::size_t j = 0; j < map.in_dim(); ++j) {
                    Matrix unit = Matrix::zero(map.in_dim(), map.in_dim());
                    unit(i, j) = 1.0;
                    comp = std::max(comp, (d.compress(unit) - map(unit)).max_abs());
                }
            report.add_check("stinespring_compression", comp, common.tol);
            report.add_check(
                "isometry",
                (d.isometry.adjoint() * d.isometry - Matrix::identity(map.in_dim())).max_abs(),
                1e-9);
        }
    }
    return detail::emit(report, common.quiet, out);
}

inline int run_group_induce(const std::string& group_file, const std::string& subgroup_csv,
                            const std::string& rep_file, const Common& common,
                            const std::vector<std::string>& args, std::ostream& out) {
    const FiniteGroup g = group_from_json(file_to_json(group_file));
    std::vector<std::size_t> gamma;
    std::stringstream ss(subgroup_csv);
    for (std::string item; std::getline(ss, item, ',');)
        gamma.push_back(static_cast<std::size_t>(std::stoul(item)));

    Rep l;
    l.matrices = matrix_list_from_json(file_to_json(rep_file));
    l.dim = l.matrices.empty() ? 0 : l.matrices.front().rows();
    const InducedRep ind = induce(g, gamma, l);

    Report report("group induce", detail::digest_of(args, {group_file, rep_file}));
    report.results()["dim"] = ind.rep.dim;
    report.results()["coset_representatives"] = ind.coset_reps;
    report.results()["matrices"] = matrix_list_to_json(ind.rep.matrices);
    json chi = json::array();
    for (const cplx& c : ind.rep.character()) chi.push_back(json::array({c.real(), c.imag()}));
    report.results()["character"] = std::move(chi);
    const CommutantReport comm = commutant(ind.rep.matrices);
    report.results()["commutant_dimension"] = comm.dimension;
    report.results()["irreducible"] = comm.dimension == 1;

    report.add_check("covariance", covariance_residual(ind), 1e-12);
    double unitary_defect = 0.0;
    for (const Matrix& u : ind.rep.matrices)
        unitary_defect = std::max(
            unitary_defect, (u * u.adjoint() - Matrix::identity(ind.rep.dim)).max_abs());
    report.add_check("unitarity", unitary_defect, common.tol);
    return detail::emit(report, common.quiet, out);
}

inline int run_group_dft(const std::string& input_file, const Common& common,
                         const std::vector<std::string>& args, std::ostream& out) {
    const json j = file_to_json(input_file);
    std::vector<cplx> f;
    if (j.is_array()) {
        for (const json& e : j)
            f.push_back(e.is_number() ? cplx(e.get<double>(), 0.0)
                                      : cplx(e[0].get<double>(), e[1].get<double>()));
    } else {
        const Matrix m = matrix_from_json(j);
        for (std::size_t i = 0; i < m.rows() * m.cols(); ++i) f.push_back(m.entries()[i]);
    }
    const auto uf = dft_cyclic(f);

    Report report("group dft", detail::digest_of(args, {input_file}));
    json arr = json::array();
    for (const cplx& z : uf) arr.push_back(json::array({z.real(), z.imag()}));
    report.results()["transform"] = std::move(arr);

    double n1 = 0.0, n2 = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        n1 += std::norm(f[k]);
        n2 += std::norm(uf[k]);
    }
    report.add_check("parseval", std::abs(n1 - n2), 1e-12);
    return detail::emit(report, common.quiet, out);
}

inline int run_group_haar(double a, double b, double center_a, double width, std::size_t grid_n,
                          const Common& common, const std::vector<std::string>& args,
                          std::ostream& out) {
    auto bump = [=](double aa, double bb) {
        const double da = (aa - center_a) / width, db = bb / width;
        return std::exp(-0.5 * (da * da + db * db));
    };
    QuadratureGrid grid;
    grid.na = grid_n;
    grid.nb = grid_n;
    const HaarCheckReport haar = axb_haar_check(bump, a, b, grid);

    Report report("group haar-check", detail::digest_of(args, {}));
    report.results()["modular"] = haar.modular;
    report.results()["left_residual"] = haar.left_residual;
    report.results()["right_residual"] = haar.right_residual;
    report.results()["quadrature_error_bound"] = haar.quadrature_error_bound;
    report.add_check("left_invariance", haar.left_residual, 1e-6);
    report.add_check("right_invariance", haar.right_residual, 1e-6);
    return detail::emit(report, common.quiet, out);
}

inline int run_extension(std::size_t grid, double theta, const Common& common,
                         const std::vector<std::string>& args, std::ostream& out) {
    const GridOperator op = momentum_operator(grid);
    const DeficiencyData def = deficiency(op);
    const ExtensionSpectrum spec = self_adjoint_extension(op, theta, &def);

    Report report("extension", detail::digest_of(args, {}));
    report.results()["d_plus"] = def.d_plus;
    report.results()["d_minus"] = def.d_minus;
    report.results()["eigenvalues"] = spec.eigenvalues;

    double worst = 0.0;
    for (int n = -3; n <= 3; ++n) {
        const double target = theta + 2.0 * std::numbers::pi * n;
        double best = 1e300;
        for (double v : spec.eigenvalues)
            if (std::abs(v - target) < best) best = std::abs(v - target);
        worst = std::max(worst, best);
    }
    report.add_check("spectrum_formula", worst, 1e-3);
    report.add_check("spectrum_real", spec.max_imag, 1e-9);
    return detail::emit(report, common.quiet, out);
}

inline int run_brownian(std::size_t grid, std::size_t modes, std::size_t paths, bool cov_check,
                        bool emit_paths, const Common& common,
                        const std::vector<std::string>& args, std::ostream& out) {
    const KLBasis basis = kl_decompose(grid, modes);

    Report report("brownian", detail::digest_of(args, {}));
    report.results()["grid"] = basis.grid;
    report.results()["eigenvalues"] = basis.eigenvalues;

    const double pi = std::numbers::pi;
    const double lead = 1.0 / ((0.5 * pi) * (0.5 * pi));
    report.add_check("leading_eigenvalue_relative",
                     std::abs(basis.eigenvalues.front() - lead) / lead, 1e-3);
    double sum = 0.0;
    for (double lam : kl_decompose(grid, grid).eigenvalues) sum += lam;
    report.add_check("trace_half", std::abs(sum - 0.5), 1e-3);

    if (paths > 0) {
        const auto ensemble = sample_paths(basis, paths, common.seed);
        if (emit_paths) {
            json arr = json::array();
            for (const auto& p : ensemble) arr.push_back(p);
            report.results()["paths"] = std::move(arr);
        }
        if (cov_check) {
            const Matrix cov = empirical_covariance(ensemble);
            double worst = 0.0;
            for (std::size_t i = 0; i < grid; ++i)
                for (std::size_t j = 0; j < grid; ++j)
                    worst = std::max(worst, std::abs(std::real(cov(i, j)) -
                                                     std::min(basis.grid[i], basis.grid[j])));
            report.results()["covariance_max_deviation"] = worst;
            report.add_check("covariance", worst, 0.02);
        }
    }
    return detail::emit(report, common.quiet, out);
}

inline int run_wavelet(int level, const Common& common, const std::vector<std::string>& args,
                       std::ostream& out) {
    const HaarBasis basis = haar_basis(level);
    const OperatorMatrix m = mt_matrix(basis);
    const DecayReport decay = diagonal_plus_compact_report(m);

    Report report("wavelet mt-matrix", detail::digest_of(args, {}));
    report.results()["size"] = m.size();
    report.results()["matrix"] = matrix_to_json(m.to_matrix());
    json pairs = json::array();
    for (const auto& p : decay.pairs)
        pairs.push_back(json{{"level_a", p.level_a}, {"level_b", p.level_b}, {"max", p.max_entry}});
    report.results()["level_pair_decay"] = std::move(pairs);
    report.results()["fitted_slope"] = decay.fitted_slope;
    report.results()["max_off_diagonal"] = decay.max_off_diagonal;

    // exactness witness: top-left entry is exactly 1/2
    report.add_check("scaling_moment_exact",
                     m.entries[0][0] == DyadicSqrt2::dyadic(1, 1) ? 0.0 : 1.0, 0.0);
    double sym = 0.0;
    for (std::size_t a = 0; a < m.size(); ++a)
        for (std::size_t b = 0; b < m.size(); ++b)
            if (!(m.entries[a][b] == m.entries[b][a])) sym = 1.0;
    report.add_check("symmetry_exact", sym, 0.0);
    return detail::emit(report, common.quiet, out);
}

// ---- driver -----------------------------------------------------------------

inline int run(std::vector<std::string> args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
    CLI::App app{"finite-dimensional operator theory toolkit"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    Common common;
    app.add_option("--tol", common.tol, "default residual tolerance");
    app.add_option("--seed", common.seed, "random seed for sampling commands");
    app.add_flag("--quiet", common.quiet, "suppress the JSON report");

    // spectral decompose
    auto* spectral_cmd = app.add_subcommand("spectral", "spectral decomposition");
    auto* decompose = spectral_cmd->add_subcommand("decompose", "decompose a Hermitian matrix");
    std::string matrix_file;
    double group_tol = -1.0;
    decompose->add_option("--matrix", matrix_file, "matrix JSON file")->required();
    decompose->add_option("--group-tol", group_tol, "eigenvalue clustering tolerance");

    // gns
    auto* gns_cmd = app.add_subcommand("gns", "GNS construction from a state");
    std::string algebra_file, state_file;
    gns_cmd->add_option("--algebra", algebra_file, "algebra JSON file")->required();
    gns_cmd->add_option("--state", state_file, "state JSON file")->required();

    // commutant
    auto* comm_cmd = app.add_subcommand("commutant", "commutant of a generator list");
    std::string generators_file;
    comm_cmd->add_option("--generators", generators_file, "JSON array of matrices")->required();

    // cp verify
    auto* cp_cmd = app.add_subcommand("cp", "completely positive maps");
    auto* verify = cp_cmd->add_subcommand("verify", "test complete positivity");
    std::string choi_file, kraus_file;
    std::size_t in_dim = 0, out_dim = 0;
    auto* choi_opt = verify->add_option("--choi", choi_file, "Choi matrix JSON");
    verify->add_option("--kraus", kraus_file, "Kraus list JSON")->excludes(choi_opt);
    verify->add_option("--in-dim", in_dim, "input dimension for a bare Choi matrix");
    verify->add_option("--out-dim", out_dim, "output dimension for a bare Choi matrix");

    // group
    auto* group_cmd = app.add_subcommand("group", "finite group computations");
    auto* induce_cmd = group_cmd->add_subcommand("induce", "induced representation");
    std::string group_file, subgroup_csv, rep_file;
    induce_cmd->add_option("--group", group_file, "group JSON file")->required();
    induce_cmd->add_option("--subgroup", subgroup_csv, "comma-separated element indices")
        ->required();
    induce_cmd->add_option("--rep", rep_file, "JSON array: one matrix per subgroup element")
        ->required();
    auto* dft_cmd = group_cmd->add_subcommand("dft", "cyclic Fourier transform");
    std::string dft_input;
    dft_cmd->add_option("--input", dft_input, "vector JSON file")->required();
    auto* haar_cmd = group_cmd->add_subcommand("haar-check", "ax+b Haar invariance");
    double haar_a = 2.0, haar_b = 1.0, center_a = 2.5, width = 0.3;
    std::size_t grid_n = 400;
    haar_cmd->add_option("--a", haar_a, "translation a > 0");
    haar_cmd->add_option("--b", haar_b, "translation b");
    haar_cmd->add_option("--center-a", center_a, "bump center in a");
    haar_cmd->add_option("--width", width, "bump width");
    haar_cmd->add_option("--grid-n", grid_n, "quadrature points per axis");

    // extension
    auto* ext_cmd = app.add_subcommand("extension", "self-adjoint extensions of (1/i) d/dx");
    std::size_t ext_grid = 512;
    double theta = 0.0;
    ext_cmd->add_option("--grid", ext_grid, "grid size N");
    ext_cmd->add_option("--theta", theta, "boundary phase in [0, 2 pi)");

    // brownian
    auto* brown_cmd = app.add_subcommand("brownian", "Karhunen-Loeve decomposition");
    std::size_t b_grid = 512, b_modes = 64, b_paths = 0;
    bool cov_check = false, emit_paths = false;
    brown_cmd->add_option("--grid", b_grid, "grid size N");
    brown_cmd->add_option("--modes", b_modes, "number of modes");
    brown_cmd->add_option("--paths", b_paths, "number of sampled paths");
    brown_cmd->add_flag("--cov-check", cov_check, "compare empirical covariance to min(s,t)");
    brown_cmd->add_flag("--emit-paths", emit_paths, "embed sampled paths in the report");

    // wavelet
    auto* wav_cmd = app.add_subcommand("wavelet", "Haar wavelet computations");
    auto* mt_cmd = wav_cmd->add_subcommand("mt-matrix", "multiplication-by-t matrix");
    int level = 4;
    mt_cmd->add_option("--level", level, "maximal wavelet level J");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help() << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "argument error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (decompose->parsed()) return run_spectral(matrix_file, group_tol, common, args, out);
        if (gns_cmd->parsed()) return run_gns(algebra_file, state_file, common, args, out);
        if (comm_cmd->parsed()) return run_commutant(generators_file, common, args, out);
        if (verify->parsed()) {
            if (choi_file.empty() && kraus_file.empty())
                raise(errc::parse_error, "cp verify needs --choi or --kraus");
            return run_cp_verify(
                choi_file.empty() ? std::nullopt : std::optional<std::string>(choi_file),
                kraus_file.empty() ? std::nullopt : std::optional<std::string>(kraus_file), in_dim,
                out_dim, common, args, out);
        }
        if (induce_cmd->parsed())
            return run_group_induce(group_file, subgroup_csv, rep_file, common, args, out);
        if (dft_cmd->parsed()) return run_group_dft(dft_input, common, args, out);
        if (haar_cmd->parsed())
            return run_group_haar(haar_a, haar_b, center_a, width, grid_n, common, args, out);
        if (ext_cmd->parsed()) return run_extension(ext_grid, theta, common, args, out);
        if (brown_cmd->parsed())
            return run_brownian(b_grid, b_modes, b_paths, cov_check, emit_paths, common, args, out);
        if (mt_cmd->parsed()) return run_wavelet(level, common, args, out);
        err << "no subcommand selected\n";
        return 2;
    } catch (const error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace finop::cli
