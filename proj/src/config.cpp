#include "chordv/config.hpp"

#include "chordv/errors.hpp"

#include "defaults_conf.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace chordv {

namespace pt = boost::property_tree;

namespace {

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

double parse_double(const std::string& raw, const std::string& key)
{
    const std::string text = trim(raw);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        throw ValidationError("config: '" + key + "' expects a number, got '" + text + "'");
    return value;
}

template <typename Int>
Int parse_int(const std::string& raw, const std::string& key)
{
    const std::string text = trim(raw);
    Int value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        throw ValidationError("config: '" + key + "' expects an integer, got '" + text + "'");
    return value;
}

bool parse_bool(const std::string& raw, const std::string& key)
{
    std::string text = trim(raw);
    std::transform(text.begin(), text.end(), text.begin(), [](unsigned char c) { return std::tolower(c); });
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    throw ValidationError("config: '" + key + "' expects true/false, got '" + text + "'");
}

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> out;
    if (trim(text).empty()) return out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = text.find(sep, start);
        std::string item = trim(text.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
        if (item.empty())
            throw ValidationError("config: empty item in list '" + text + "'");
        out.push_back(std::move(item));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

AdjointMode parse_adjoint(const std::string& v)
{
    const std::string t = trim(v);
    if (t == "sum") return AdjointMode::Sum;
    if (t == "average" || t == "avg") return AdjointMode::Average;
    throw ValidationError("config: adjoint must be sum or average, got '" + t + "'");
}

ThresholdMode parse_threshold(const std::string& v)
{
    const std::string t = trim(v);
    if (t == "inv_beta") return ThresholdMode::InverseBeta;
    if (t == "gamma_over_beta") return ThresholdMode::GammaOverBeta;
    throw ValidationError("config: threshold must be inv_beta or gamma_over_beta, got '" + t + "'");
}

DualInit parse_dual_init(const std::string& v)
{
    const std::string t = trim(v);
    if (t == "ones") return DualInit::Ones;
    if (t == "zero") return DualInit::Zero;
    throw ValidationError("config: dual_init must be ones or zero, got '" + t + "'");
}

PeakStatistic parse_peak_statistic(const std::string& v)
{
    const std::string t = trim(v);
    if (t == "pearson") return PeakStatistic::Pearson;
    if (t == "height_ratio") return PeakStatistic::HeightRatio;
    throw ValidationError("config: peak_statistic must be pearson or height_ratio, got '" + t + "'");
}

void reject_unknown(const pt::ptree& section, const std::string& name, const std::set<std::string>& allowed)
{
    for (const auto& [key, value] : section) {
        if (!allowed.contains(key))
            throw ValidationError("config: unknown key '" + key + "' in [" + name + "]");
    }
}

pt::ptree read_ini_stream(std::istream& in)
{
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ValidationError(std::string("config: ") + e.what());
    }
    for (const auto& [key, value] : tree) {
        if (!value.data().empty() && value.empty())
            throw ValidationError("config: key '" + key + "' outside any [section]");
    }
    return tree;
}

void apply_solver_sections(const pt::ptree& tree, SolverSettings& s)
{
    if (const auto sec = tree.get_child_optional("chord_v")) {
        reject_unknown(*sec, "chord_v",
                       {"lambda", "mu", "gamma", "beta", "tau", "eta", "max_iter", "r_hat", "adjoint",
                        "threshold", "dual_init", "overwrite", "clamp_poles"});
        auto& c = s.chord_v;
        for (const auto& [key, node] : *sec) {
            const std::string& v = node.data();
            const std::string k = "chord_v." + key;
            if (key == "lambda") c.lambda = parse_double(v, k);
            else if (key == "mu") c.mu = parse_double(v, k);
            else if (key == "gamma") c.gamma = parse_double(v, k);
            else if (key == "beta") c.beta = parse_double(v, k);
            else if (key == "tau") c.tau = parse_double(v, k);
            else if (key == "eta") c.eta = parse_double(v, k);
            else if (key == "max_iter") c.max_iter = parse_int<int>(v, k);
            else if (key == "r_hat") c.r_hat = parse_int<Eigen::Index>(v, k);
            else if (key == "adjoint") c.adjoint = parse_adjoint(v);
            else if (key == "threshold") c.threshold = parse_threshold(v);
            else if (key == "dual_init") c.dual_init = parse_dual_init(v);
            else if (key == "overwrite") c.overwrite_with_model = parse_bool(v, k);
            else if (key == "clamp_poles") c.clamp_poles = parse_bool(v, k);
        }
    }
    if (const auto sec = tree.get_child_optional("chord")) {
        reject_unknown(*sec, "chord", {"lambda", "beta", "tau", "eta", "max_iter", "adjoint", "dual_init"});
        auto& c = s.chord;
        for (const auto& [key, node] : *sec) {
            const std::string& v = node.data();
            const std::string k = "chord." + key;
            if (key == "lambda") c.lambda = parse_double(v, k);
            else if (key == "beta") c.beta = parse_double(v, k);
            else if (key == "tau") c.tau = parse_double(v, k);
            else if (key == "eta") c.eta = parse_double(v, k);
            else if (key == "max_iter") c.max_iter = parse_int<int>(v, k);
            else if (key == "adjoint") c.adjoint = parse_adjoint(v);
            else if (key == "dual_init") c.dual_init = parse_dual_init(v);
        }
    }
    if (const auto sec = tree.get_child_optional("cadzow")) {
        reject_unknown(*sec, "cadzow", {"r_hat", "max_iter", "eta"});
        for (const auto& [key, node] : *sec) {
            const std::string k = "cadzow." + key;
            if (key == "r_hat") s.cadzow.r_hat = parse_int<Eigen::Index>(node.data(), k);
            else if (key == "max_iter") s.cadzow.max_iter = parse_int<int>(node.data(), k);
            else if (key == "eta") s.cadzow.eta = parse_double(node.data(), k);
        }
    }
    if (const auto sec = tree.get_child_optional("rqrd")) {
        reject_unknown(*sec, "rqrd", {"r_hat"});
        if (const auto v = sec->get_optional<std::string>("r_hat"))
            s.rqrd_r_hat = parse_int<Eigen::Index>(*v, "rqrd.r_hat");
    }
    if (const auto sec = tree.get_child_optional("tsvd")) {
        reject_unknown(*sec, "tsvd", {"r_hat"});
        if (const auto v = sec->get_optional<std::string>("r_hat"))
            s.tsvd_r_hat = parse_int<Eigen::Index>(*v, "tsvd.r_hat");
    }
}

ModelSpec parse_model_section(const pt::ptree& sec)
{
    reject_unknown(sec, "model", {"dt", "n_samples", "components"});
    ModelSpec spec;
    spec.components.clear();
    if (const auto v = sec.get_optional<std::string>("dt")) spec.dt = parse_double(*v, "model.dt");
    if (const auto v = sec.get_optional<std::string>("n_samples"))
        spec.n_samples = parse_int<std::size_t>(*v, "model.n_samples");
    const auto comps = sec.get_optional<std::string>("components");
    if (!comps)
        throw ValidationError("config: [model] needs a components entry");
    for (const auto& triple : split(*comps, ';')) {
        std::istringstream fields(triple);
        std::string a, f, d, extra;
        if (!(fields >> a >> f >> d) || (fields >> extra))
            throw ValidationError("config: component '" + triple + "' must be 'amplitude frequency decay'");
        spec.components.push_back({parse_double(a, "model.components"), parse_double(f, "model.components"),
                                   parse_double(d, "model.components")});
    }
    spec.validate();
    return spec;
}

} // namespace

std::vector<double> parse_double_list(const std::string& text)
{
    std::vector<double> out;
    for (const auto& item : split(text, ',')) out.push_back(parse_double(item, "list"));
    return out;
}

std::vector<Eigen::Index> parse_index_list(const std::string& text)
{
    std::vector<Eigen::Index> out;
    for (const auto& item : split(text, ',')) out.push_back(parse_int<Eigen::Index>(item, "list"));
    return out;
}

SolverSettings parse_solver_settings(std::istream& in, SolverSettings base)
{
    const auto tree = read_ini_stream(in);
    apply_solver_sections(tree, base);
    return base;
}

SolverSettings default_solver_settings()
{
    static const SolverSettings cached = [] {
        std::istringstream in(detail::defaults_conf);
        return parse_solver_settings(in, SolverSettings{});
    }();
    return cached;
}

ExperimentConfig parse_experiment_config(std::istream& in, ExperimentConfig base)
{
    const auto tree = read_ini_stream(in);
    for (const auto& [name, sec] : tree) {
        static const std::set<std::string> known{"experiment", "model", "chord_v", "chord", "cadzow", "rqrd", "tsvd"};
        if (!known.contains(name))
            throw ValidationError("config: unknown section [" + name + "]");
    }
    apply_solver_sections(tree, base.settings);

    std::string model_choice;
    if (const auto sec = tree.get_child_optional("experiment")) {
        reject_unknown(*sec, "experiment",
                       {"model", "solvers", "sigmas", "r_hats", "trials", "base_seed", "threads", "output",
                        "timing", "peak_statistic", "peak_window_fwhm", "snapshots"});
        for (const auto& [key, node] : *sec) {
            const std::string& v = node.data();
            const std::string k = "experiment." + key;
            if (key == "model") model_choice = trim(v);
            else if (key == "solvers") {
                base.solvers.clear();
                for (const auto& name : split(v, ',')) base.solvers.push_back(parse_solver_kind(name));
            } else if (key == "sigmas") base.sigmas = parse_double_list(v);
            else if (key == "r_hats") base.r_hats = parse_index_list(v);
            else if (key == "trials") base.trials = parse_int<int>(v, k);
            else if (key == "base_seed") base.base_seed = parse_int<std::uint64_t>(v, k);
            else if (key == "threads") base.threads = parse_int<unsigned>(v, k);
            else if (key == "output") base.output_path = trim(v);
            else if (key == "timing") base.record_wall_time = parse_bool(v, k);
            else if (key == "peak_statistic") base.peak_statistic = parse_peak_statistic(v);
            else if (key == "peak_window_fwhm") base.peak_window_fwhm = parse_double(v, k);
            else if (key == "snapshots") {
                base.snapshots.clear();
                for (const auto i : parse_index_list(v)) base.snapshots.push_back(static_cast<int>(i));
            }
        }
    }

    if (model_choice == "custom") {
        const auto sec = tree.get_child_optional("model");
        if (!sec) throw ValidationError("config: model = custom needs a [model] section");
        base.model = parse_model_section(*sec);
        base.reference_path.clear();
    } else if (model_choice == "reference_5peak") {
        base.model = reference_5peak();
        base.reference_path.clear();
    } else if (!model_choice.empty()) {
        base.reference_path = model_choice;
    }
    return base;
}

ExperimentConfig load_experiment_config(const std::string& path, ExperimentConfig base)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file '" + path + "'");
    auto cfg = parse_experiment_config(in, std::move(base));
    if (!cfg.reference_path.empty()) {
        const std::filesystem::path ref(cfg.reference_path);
        if (ref.is_relative())
            cfg.reference_path = (std::filesystem::path(path).parent_path() / ref).string();
    }
    return cfg;
}

} // namespace chordv
