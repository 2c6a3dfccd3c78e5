#include "chordv/harness.hpp"

#include "chordv/errors.hpp"
#include "chordv/fid_io.hpp"
#include "chordv/linalg.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>
#include <tuple>

namespace chordv {

namespace {

struct GroundTruth {
    Fid clean;
    Spectrum spectrum;
    std::vector<PeakWindow> windows; // empty in real-data mode
};

GroundTruth load_truth(const ExperimentConfig& cfg)
{
    if (!cfg.reference_path.empty()) {
        Fid clean = read_fid(cfg.reference_path);
        Spectrum spec = dft_spectrum(clean);
        return {std::move(clean), std::move(spec), {}};
    }
    Fid clean = synthesize_fid(cfg.model);
    Spectrum spec = dft_spectrum(clean);
    return {std::move(clean), std::move(spec), peak_windows(cfg.model, cfg.peak_window_fwhm)};
}

std::vector<Eigen::Index> window_bins(const Spectrum& s, const PeakWindow& w)
{
    std::vector<Eigen::Index> bins;
    for (std::size_t k = 0; k < s.frequency_axis.size(); ++k) {
        const double f = s.frequency_axis[k];
        if (f >= w.low_hz && f <= w.high_hz) bins.push_back(static_cast<Eigen::Index>(k));
    }
    return bins;
}

void require_same_bins(const Spectrum& a, const Spectrum& b)
{
    if (a.bins.size() != b.bins.size())
        throw ValidationError("peak statistics need spectra with equal bin counts");
}

struct Cell {
    SolverKind solver;
    double sigma;
    std::optional<Eigen::Index> r_hat;
    int trial;
};

SolverResult dispatch(const Fid& y, SolverKind kind, const SolverSettings& s, std::optional<Eigen::Index> r_hat,
                      std::uint64_t trial_seed)
{
    switch (kind) {
    case SolverKind::ChordV: {
        ChordVConfig c = s.chord_v;
        if (r_hat) c.r_hat = *r_hat;
        return chord_v(y, c);
    }
    case SolverKind::Chord:
        return chord(y, s.chord);
    case SolverKind::Cadzow: {
        CadzowConfig c = s.cadzow;
        if (r_hat) c.r_hat = *r_hat;
        return cadzow(y, c);
    }
    case SolverKind::Rqrd:
        return rqrd(y, RqrdConfig{r_hat.value_or(s.rqrd_r_hat), trial_seed});
    case SolverKind::Tsvd:
        return tsvd_denoise(y, r_hat.value_or(s.tsvd_r_hat));
    }
    throw ValidationError("unknown solver");
}

std::optional<Eigen::Index> configured_rank(SolverKind kind, const SolverSettings& s)
{
    switch (kind) {
    case SolverKind::ChordV: return s.chord_v.r_hat;
    case SolverKind::Chord: return std::nullopt;
    case SolverKind::Cadzow: return s.cadzow.r_hat;
    case SolverKind::Rqrd: return s.rqrd_r_hat;
    case SolverKind::Tsvd: return s.tsvd_r_hat;
    }
    return std::nullopt;
}

TrialRecord run_cell(const GroundTruth& truth, const ExperimentConfig& cfg, const Cell& cell)
{
    TrialRecord rec;
    rec.solver = std::string(solver_name(cell.solver));
    rec.sigma = cell.sigma;
    rec.r_hat = cell.r_hat;
    rec.trial = cell.trial;

    const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(cell.trial);
    try {
        const Fid noisy = add_noise(truth.clean, NoiseSpec{cell.sigma, seed});
        const auto start = std::chrono::steady_clock::now();
        const SolverResult result = dispatch(noisy, cell.solver, cfg.settings, cell.r_hat, seed);
        const auto stop = std::chrono::steady_clock::now();

        rec.nrmse = nrmse(result.denoised, truth.clean);
        rec.iterations = result.iterations;
        rec.converged = result.converged;
        if (cfg.record_wall_time)
            rec.wall_time = std::chrono::duration<double>(stop - start).count();
        if (!truth.windows.empty()) {
            const Spectrum spec = dft_spectrum(result.denoised);
            rec.per_peak_correlation = cfg.peak_statistic == PeakStatistic::Pearson
                                           ? peak_correlation(spec, truth.spectrum, truth.windows)
                                           : peak_height_ratio(spec, truth.spectrum, truth.windows);
        }
    } catch (const Error& e) {
        rec.error = e.what();
        rec.nrmse = std::numeric_limits<double>::quiet_NaN();
        rec.iterations = 0;
        rec.converged = false;
        rec.per_peak_correlation.clear();
    }
    return rec;
}

std::vector<TrialRecord> run_cells(const GroundTruth& truth, const ExperimentConfig& cfg,
                                   const std::vector<Cell>& cells)
{
    linalg::use_single_threaded_kernels();
    std::vector<TrialRecord> out(cells.size());
    unsigned workers = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(cells.size(), 1)));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            try {
                out[i] = run_cell(truth, cfg, cells[i]);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = cells.size();
                return;
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

bool record_less(const TrialRecord& a, const TrialRecord& b)
{
    const auto ka = std::make_tuple(std::cref(a.solver), a.sigma, a.r_hat.value_or(-1), a.trial);
    const auto kb = std::make_tuple(std::cref(b.solver), b.sigma, b.r_hat.value_or(-1), b.trial);
    return ka < kb;
}

std::vector<std::string> split_fields(const std::string& line)
{
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        fields.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (!fields.empty() && !fields.back().empty() && fields.back().back() == '\r') fields.back().pop_back();
    return fields;
}

template <typename T>
T parse_field(const std::string& text, const char* column, std::size_t line_no)
{
    T v{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
        throw ValidationError("results CSV line " + std::to_string(line_no) + ": bad " + column + " '" + text + "'");
    return v;
}

} // namespace

std::string_view solver_name(SolverKind kind) noexcept
{
    switch (kind) {
    case SolverKind::ChordV: return "chord_v";
    case SolverKind::Chord: return "chord";
    case SolverKind::Cadzow: return "cadzow";
    case SolverKind::Rqrd: return "rqrd";
    case SolverKind::Tsvd: return "tsvd";
    }
    return "unknown";
}

SolverKind parse_solver_kind(std::string_view name)
{
    for (auto kind : {SolverKind::ChordV, SolverKind::Chord, SolverKind::Cadzow, SolverKind::Rqrd, SolverKind::Tsvd})
        if (solver_name(kind) == name) return kind;
    throw ValidationError("unknown solver '" + std::string(name) + "' (expected chord_v, chord, cadzow, rqrd or tsvd)");
}

void ExperimentConfig::validate() const
{
    if (trials < 1)
        throw ValidationError("trials must be >= 1");
    if (sigmas.empty())
        throw ValidationError("at least one sigma is required");
    for (double s : sigmas)
        if (!(s >= 0.0) || !std::isfinite(s))
            throw ValidationError("sigma values must be finite and >= 0");
    if (solvers.empty())
        throw ValidationError("at least one solver is required");
    for (auto r : r_hats)
        if (r < 1) throw ValidationError("r_hat values must be >= 1");
    if (!(peak_window_fwhm > 0.0))
        throw ValidationError("peak_window_fwhm must be > 0");
    if (reference_path.empty()) model.validate();
}

std::vector<PeakWindow> peak_windows(const ModelSpec& model, double fwhm_multiple)
{
    model.validate();
    std::vector<ExponentialComponent> comps = model.components;
    std::sort(comps.begin(), comps.end(),
              [](const auto& a, const auto& b) { return a.frequency < b.frequency; });
    const double bin_hz = 1.0 / (static_cast<double>(model.n_samples) * model.dt);

    std::vector<PeakWindow> windows;
    for (const auto& c : comps) {
        const double half = std::max(fwhm_multiple * c.decay / std::numbers::pi, 2.0 * bin_hz);
        windows.push_back({c.frequency - half, c.frequency + half});
    }
    for (std::size_t i = 0; i + 1 < windows.size(); ++i) {
        if (windows[i].high_hz >= windows[i + 1].low_hz) {
            const double mid = 0.5 * (comps[i].frequency + comps[i + 1].frequency);
            windows[i].high_hz = std::nextafter(mid, -1e300);
            windows[i + 1].low_hz = mid;
        }
    }
    return windows;
}

std::vector<std::optional<double>> peak_correlation(const Spectrum& denoised, const Spectrum& truth,
                                                    const std::vector<PeakWindow>& windows)
{
    require_same_bins(denoised, truth);
    std::vector<std::optional<double>> out;
    for (const auto& w : windows) {
        const auto bins = window_bins(truth, w);
        if (bins.size() < 2) {
            out.push_back(std::nullopt);
            continue;
        }
        const auto m = static_cast<double>(bins.size());
        double mean_d = 0.0, mean_t = 0.0;
        for (auto k : bins) {
            mean_d += std::abs(denoised.bins[k]);
            mean_t += std::abs(truth.bins[k]);
        }
        mean_d /= m;
        mean_t /= m;
        double sdd = 0.0, stt = 0.0, sdt = 0.0;
        for (auto k : bins) {
            const double d = std::abs(denoised.bins[k]) - mean_d;
            const double t = std::abs(truth.bins[k]) - mean_t;
            sdd += d * d;
            stt += t * t;
            sdt += d * t;
        }
        if (sdd <= 0.0 || stt <= 0.0) {
            out.push_back(std::nullopt);
            continue;
        }
        out.push_back(std::clamp(sdt / std::sqrt(sdd * stt), -1.0, 1.0));
    }
    return out;
}

std::vector<std::optional<double>> peak_height_ratio(const Spectrum& denoised, const Spectrum& truth,
                                                     const std::vector<PeakWindow>& windows)
{
    require_same_bins(denoised, truth);
    std::vector<std::optional<double>> out;
    for (const auto& w : windows) {
        const auto bins = window_bins(truth, w);
        double hd = 0.0, ht = 0.0;
        for (auto k : bins) {
            hd = std::max(hd, std::abs(denoised.bins[k]));
            ht = std::max(ht, std::abs(truth.bins[k]));
        }
        if (bins.empty() || ht == 0.0) {
            out.push_back(std::nullopt);
            continue;
        }
        out.push_back(std::min(hd, ht) / std::max(hd, ht));
    }
    return out;
}

std::vector<TrialRecord> run_noise_sweep(const ExperimentConfig& cfg)
{
    cfg.validate();
    const GroundTruth truth = load_truth(cfg);
    std::vector<Cell> cells;
    for (double sigma : cfg.sigmas)
        for (auto kind : cfg.solvers)
            for (int t = 0; t < cfg.trials; ++t)
                cells.push_back({kind, sigma, configured_rank(kind, cfg.settings), t});
    auto records = run_cells(truth, cfg, cells);
    sort_records(records);
    return records;
}

std::vector<TrialRecord> run_rank_sweep(const ExperimentConfig& cfg)
{
    cfg.validate();
    const bool has_chord = std::find(cfg.solvers.begin(), cfg.solvers.end(), SolverKind::Chord) != cfg.solvers.end();
    const bool only_chord = std::all_of(cfg.solvers.begin(), cfg.solvers.end(),
                                        [](SolverKind k) { return k == SolverKind::Chord; });
    if (cfg.r_hats.empty() && !only_chord)
        throw ValidationError("rank sweep needs r_hats unless chord is the only solver");

    const GroundTruth truth = load_truth(cfg);
    std::vector<Cell> cells;
    for (double sigma : cfg.sigmas) {
        if (has_chord)
            for (int t = 0; t < cfg.trials; ++t) cells.push_back({SolverKind::Chord, sigma, std::nullopt, t});
        for (auto r : cfg.r_hats)
            for (auto kind : cfg.solvers) {
                if (kind == SolverKind::Chord) continue;
                for (int t = 0; t < cfg.trials; ++t) cells.push_back({kind, sigma, r, t});
            }
    }
    auto computed = run_cells(truth, cfg, cells);

    std::vector<TrialRecord> records;
    for (auto& rec : computed) {
        if (rec.solver == solver_name(SolverKind::Chord) && !cfg.r_hats.empty()) {
            for (auto r : cfg.r_hats) {
                TrialRecord copy = rec;
                copy.r_hat = r;
                records.push_back(std::move(copy));
            }
        } else {
            records.push_back(std::move(rec));
        }
    }
    sort_records(records);
    return records;
}

ConvergenceTrace run_convergence_trace(const Fid& y, const Fid& truth, const ChordVConfig& cfg,
                                       const std::vector<int>& snapshot_iterations)
{
    if (y.size() != truth.size())
        throw ValidationError("convergence trace: noisy and clean signals differ in length");

    std::vector<int> wanted = snapshot_iterations;
    std::sort(wanted.begin(), wanted.end());
    wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());
    for (int k : wanted)
        if (k < 0) throw ValidationError("snapshot iterations must be >= 0");

    std::vector<double> nrmse_trace;
    std::vector<SpectrumSnapshot> snapshots;
    auto wants = [&](int k) { return std::binary_search(wanted.begin(), wanted.end(), k); };
    if (wants(0)) snapshots.push_back({0, 0, dft_spectrum(y)});

    SolverResult result = chord_v(y, cfg, [&](const IterationView& view) {
        const Fid current(view.x, y.dt());
        nrmse_trace.push_back(nrmse(current, truth));
        if (wants(view.iteration)) snapshots.push_back({view.iteration, view.iteration, dft_spectrum(current)});
    });
    for (int k : wanted)
        if (k > result.iterations)
            snapshots.push_back({k, result.iterations, dft_spectrum(result.denoised)});
    return {std::move(result), std::move(nrmse_trace), std::move(snapshots)};
}

void sort_records(std::vector<TrialRecord>& records)
{
    std::stable_sort(records.begin(), records.end(), record_less);
}

void write_records_csv(std::vector<TrialRecord> records, std::ostream& out)
{
    sort_records(records);
    std::size_t peaks = 0;
    for (const auto& r : records) peaks = std::max(peaks, r.per_peak_correlation.size());

    out << "solver,sigma,r_hat,trial,nrmse,iterations,converged,wall_time_s";
    for (std::size_t i = 1; i <= peaks; ++i) out << ",peak_corr_" << std::to_string(i);
    out << '\n';
    for (const auto& r : records) {
        out << r.solver << ',' << format_double(r.sigma) << ',' << (r.r_hat ? std::to_string(*r.r_hat) : "")
            << ',' << std::to_string(r.trial) << ',' << (r.failed() ? "" : format_double(r.nrmse)) << ','
            << std::to_string(r.iterations) << ',' << (r.converged ? "true" : "false") << ','
            << (r.wall_time ? format_double(*r.wall_time) : "");
        for (std::size_t i = 0; i < peaks; ++i) {
            out << ',';
            if (i < r.per_peak_correlation.size() && r.per_peak_correlation[i])
                out << format_double(*r.per_peak_correlation[i]);
        }
        out << '\n';
    }
}

void emit_csv(const std::vector<TrialRecord>& records, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write results file '" + path + "'");
    write_records_csv(records, out);
    out.flush();
    if (!out)
        throw IoError("write failed for '" + path + "'");
}

std::vector<TrialRecord> parse_records_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line))
        throw ValidationError("results CSV: missing header");
    const auto header = split_fields(line);
    static const std::vector<std::string> fixed{"solver", "sigma", "r_hat", "trial", "nrmse",
                                                "iterations", "converged", "wall_time_s"};
    if (header.size() < fixed.size() || !std::equal(fixed.begin(), fixed.end(), header.begin()))
        throw ValidationError("results CSV: unexpected header '" + line + "'");
    const std::size_t peaks = header.size() - fixed.size();

    std::vector<TrialRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto f = split_fields(line);
        if (f.size() != header.size())
            throw ValidationError("results CSV line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(header.size()) + " fields");
        TrialRecord r;
        r.solver = f[0];
        r.sigma = parse_field<double>(f[1], "sigma", line_no);
        if (!f[2].empty()) r.r_hat = parse_field<Eigen::Index>(f[2], "r_hat", line_no);
        r.trial = parse_field<int>(f[3], "trial", line_no);
        if (f[4].empty()) {
            r.error = "failed";
            r.nrmse = std::numeric_limits<double>::quiet_NaN();
        } else {
            r.nrmse = parse_field<double>(f[4], "nrmse", line_no);
        }
        r.iterations = parse_field<int>(f[5], "iterations", line_no);
        if (f[6] != "true" && f[6] != "false")
            throw ValidationError("results CSV line " + std::to_string(line_no) + ": bad converged flag");
        r.converged = f[6] == "true";
        if (!f[7].empty()) r.wall_time = parse_field<double>(f[7], "wall_time_s", line_no);
        for (std::size_t i = 0; i < peaks; ++i) {
            const auto& cell = f[fixed.size() + i];
            r.per_peak_correlation.push_back(cell.empty() ? std::nullopt
                                                          : std::optional(parse_field<double>(cell, "peak_corr", line_no)));
        }
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<Aggregate> aggregate(const std::vector<TrialRecord>& records)
{
    using Key = std::tuple<std::string, double, Eigen::Index>;
    std::map<Key, std::vector<const TrialRecord*>> groups;
    for (const auto& r : records) groups[{r.solver, r.sigma, r.r_hat.value_or(-1)}].push_back(&r);

    std::vector<Aggregate> out;
    for (const auto& [key, members] : groups) {
        Aggregate a;
        a.solver = std::get<0>(key);
        a.sigma = std::get<1>(key);
        if (std::get<2>(key) >= 0) a.r_hat = std::get<2>(key);

        std::vector<double> values;
        std::size_t peaks = 0;
        for (const auto* r : members) {
            if (r->failed()) {
                ++a.failures;
                continue;
            }
            values.push_back(r->nrmse);
            peaks = std::max(peaks, r->per_peak_correlation.size());
        }
        a.count = static_cast<int>(values.size());
        if (!values.empty()) {
            double sum = 0.0;
            for (double v : values) sum += v;
            a.mean_nrmse = sum / static_cast<double>(values.size());
            if (values.size() > 1) {
                double ss = 0.0;
                for (double v : values) ss += (v - a.mean_nrmse) * (v - a.mean_nrmse);
                a.std_nrmse = std::sqrt(ss / static_cast<double>(values.size() - 1));
            }
        }
        for (std::size_t i = 0; i < peaks; ++i) {
            double sum = 0.0;
            int n = 0;
            for (const auto* r : members) {
                if (r->failed() || i >= r->per_peak_correlation.size() || !r->per_peak_correlation[i]) continue;
                sum += *r->per_peak_correlation[i];
                ++n;
            }
            a.mean_peak_correlation.push_back(n > 0 ? std::optional(sum / n) : std::nullopt);
        }
        out.push_back(std::move(a));
    }
    return out;
}

} // namespace chordv
