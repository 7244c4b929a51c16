#include "otsm/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace otsm {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

Real parse_real(const std::string& v) {
    try {
        std::size_t pos = 0;
        const Real r = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw ConfigError("config: bad number '" + v + "'");
    }
}

long long parse_int(const std::string& v) {
    try {
        std::size_t pos = 0;
        const long long r = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw ConfigError("config: bad integer '" + v + "'");
    }
}

std::uint64_t parse_u64(const std::string& v) {
    try {
        std::size_t pos = 0;
        const std::uint64_t r = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw ConfigError("config: bad unsigned integer '" + v + "'");
    }
}

bool parse_flag(const std::string& v) {
    const std::string s = lower(v);
    if (s == "1" || s == "true" || s == "on" || s == "yes") return true;
    if (s == "0" || s == "false" || s == "off" || s == "no") return false;
    throw ConfigError("config: bad boolean '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(v);
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<Real> parse_real_list(const std::string& v) {
    std::vector<Real> out;
    for (const std::string& item : split_list(v)) out.push_back(parse_real(item));
    return out;
}

void set_key(ExperimentConfig& cfg, const std::string& section, const std::string& key,
             const std::string& value) {
    SystemParams& sys = cfg.system;
    if (section == "system") {
        if (key == "m") sys.m = static_cast<int>(parse_int(value));
        else if (key == "n") sys.n = static_cast<int>(parse_int(value));
        else if (key == "q") sys.q = static_cast<int>(parse_int(value));
        else if (key == "p") sys.p = static_cast<int>(parse_int(value));
        else if (key == "delta_f") sys.delta_f = parse_real(value);
        else if (key == "f_c") sys.f_c = parse_real(value);
        else if (key == "l_max") sys.l_max = static_cast<int>(parse_int(value));
        else if (key == "k_max") sys.k_max = static_cast<int>(parse_int(value));
        else if (key == "k_max_mode") {
            const std::string s = lower(value);
            if (s == "explicit") sys.k_max_mode = KmaxMode::Explicit;
            else if (s == "velocity") sys.k_max_mode = KmaxMode::FromVelocity;
            else throw ConfigError("config: k_max_mode must be explicit or velocity");
        } else if (key == "v_max") sys.v_max = parse_real(value);
        else if (key == "fractional_doppler") sys.fractional_doppler = parse_flag(value);
        else if (key == "sigma2_phn") sys.sigma2_phn = parse_real(value);
        else if (key == "phn_unit") {
            const std::string s = lower(value);
            if (s == "deg2") sys.phn_unit = PhnUnit::VarianceDeg2;
            else if (s == "deg") sys.phn_unit = PhnUnit::StddevDeg;
            else throw ConfigError("config: phn_unit must be deg2 or deg");
        } else if (key == "theta0_mode") {
            const std::string s = lower(value);
            if (s == "uniform") sys.theta0_mode = Theta0Mode::Uniform;
            else if (s == "fixed") sys.theta0_mode = Theta0Mode::Fixed;
            else throw ConfigError("config: theta0_mode must be uniform or fixed");
        } else if (key == "theta0_fixed_deg") sys.theta0_fixed_deg = parse_real(value);
        else if (key == "snr_db") sys.snr_db = parse_real_list(value);
        else throw ConfigError("config: unknown key system." + key);
    } else if (section == "run") {
        if (key == "windows") {
            cfg.windows.clear();
            for (const std::string& w : split_list(value)) cfg.windows.push_back(parse_window(w));
            if (cfg.windows.empty()) throw ConfigError("config: empty window list");
        } else if (key == "detector") {
            const std::string s = lower(value);
            if (s == "mld") cfg.detector = DetectorKind::Mld;
            else if (s == "lmmse") cfg.detector = DetectorKind::Lmmse;
            else throw ConfigError("config: detector must be mld or lmmse");
        } else if (key == "detector_csi") {
            const std::string s = lower(value);
            if (s == "full") cfg.detector_csi = DetectorCsi::Full;
            else if (s == "phn-blind") cfg.detector_csi = DetectorCsi::PhnBlind;
            else throw ConfigError("config: detector_csi must be full or phn-blind");
        } else if (key == "seed") cfg.seed = parse_u64(value);
        else if (key == "out_dir") cfg.out_dir = value;
        else if (key == "threads") cfg.threads = static_cast<int>(parse_int(value));
        else if (key == "target_errors") cfg.target_errors = static_cast<int>(parse_int(value));
        else if (key == "max_trials") cfg.max_trials = parse_u64(value);
        else throw ConfigError("config: unknown key run." + key);
    } else if (section == "bound") {
        if (key == "mode") {
            const std::string s = lower(value);
            if (s == "exact") cfg.bound_mode = BoundMode::Exact;
            else if (s == "sampled") cfg.bound_mode = BoundMode::Sampled;
            else throw ConfigError("config: bound mode must be exact or sampled");
        } else if (key == "realizations") cfg.bound_realizations = static_cast<int>(parse_int(value));
        else if (key == "samples") cfg.bound_samples = static_cast<int>(parse_int(value));
        else throw ConfigError("config: unknown key bound." + key);
    } else if (section == "coding") {
        if (key == "enabled") cfg.coding = parse_flag(value);
        else if (key == "codeword_len") cfg.codeword_len = static_cast<int>(parse_int(value));
        else if (key == "t_det") cfg.t_det = static_cast<int>(parse_int(value));
        else if (key == "t_ldpc") cfg.t_ldpc = static_cast<int>(parse_int(value));
        else if (key == "sigma2_list") cfg.sigma2_list = parse_real_list(value);
        else throw ConfigError("config: unknown key coding." + key);
    } else if (section == "psd") {
        if (key == "oversample") cfg.oversample = static_cast<int>(parse_int(value));
        else if (key == "segment_len") cfg.segment_len = static_cast<int>(parse_int(value));
        else if (key == "overlap") cfg.overlap = parse_real(value);
        else if (key == "n_avg") cfg.n_avg = static_cast<int>(parse_int(value));
        else if (key == "offsets") cfg.oobe_offsets = parse_real_list(value);
        else throw ConfigError("config: unknown key psd." + key);
    } else {
        throw ConfigError("config: unknown section [" + section + "]");
    }
}

template <typename T>
std::string join_list(const std::vector<T>& v, std::string (*fmt)(T)) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += fmt(v[i]);
    }
    return out;
}

}  // namespace

void ExperimentConfig::validate() const {
    system.validate();
    if (windows.empty()) throw ConfigError("config: at least one window required");
    if (threads < 1) throw ConfigError("config: threads must be >= 1");
    if (target_errors < 1) throw ConfigError("config: target_errors must be >= 1");
    if (max_trials < 1) throw ConfigError("config: max_trials must be >= 1");
    if (bound_realizations < 1) throw ConfigError("config: bound realizations must be >= 1");
    if (bound_samples < 2) throw ConfigError("config: bound samples must be >= 2");
    if (codeword_len < 8 || codeword_len % 2 != 0)
        throw ConfigError("config: codeword_len must be even and >= 8");
    if (t_det < 1) throw ConfigError("config: t_det must be >= 1");
    if (t_ldpc < 0) throw ConfigError("config: t_ldpc must be >= 0");
    for (Real s : sigma2_list)
        if (s < 0.0) throw ConfigError("config: sigma2_list entries must be >= 0");
    if (oversample < 4) throw ConfigError("config: oversample must be >= 4");
    if (segment_len < 8) throw ConfigError("config: segment_len must be >= 8");
    if (!(overlap >= 0.0 && overlap < 1.0)) throw ConfigError("config: overlap must be in [0, 1)");
    if (n_avg < 1) throw ConfigError("config: n_avg must be >= 1");
    if (oobe_offsets.empty()) throw ConfigError("config: at least one emission offset required");
    for (Real m : oobe_offsets)
        if (!(m > 1.0)) throw ConfigError("config: emission offsets must exceed 1 half-bandwidth");
    if (out_dir.empty()) throw ConfigError("config: out_dir must not be empty");
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream is(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config: malformed section at line " + std::to_string(line_no));
            section = lower(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: expected key = value at line " + std::to_string(line_no));
        const std::string key = lower(trim(line.substr(0, eq)));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw ConfigError("config: key '" + key + "' appears before any section");
        set_key(cfg, section, key, value);
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void apply_override(ExperimentConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError("config: override must be section.key=value, got '" + assignment + "'");
    const std::string path = lower(trim(assignment.substr(0, eq)));
    const std::string value = trim(assignment.substr(eq + 1));
    const auto dot = path.find('.');
    if (dot == std::string::npos)
        throw ConfigError("config: override key must be section.key, got '" + path + "'");
    set_key(cfg, path.substr(0, dot), path.substr(dot + 1), value);
}

std::string format_real(Real v) {
    char buf[40];
    for (const int prec : {15, 17}) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::string dump_config(const ExperimentConfig& cfg) {
    const SystemParams& sys = cfg.system;
    std::ostringstream os;
    os << "[system]\n";
    os << "m = " << sys.m << "\n";
    os << "n = " << sys.n << "\n";
    os << "q = " << sys.q << "\n";
    os << "p = " << sys.p << "\n";
    os << "delta_f = " << format_real(sys.delta_f) << "\n";
    os << "f_c = " << format_real(sys.f_c) << "\n";
    os << "l_max = " << sys.l_max << "\n";
    os << "k_max_mode = " << (sys.k_max_mode == KmaxMode::Explicit ? "explicit" : "velocity")
       << "\n";
    os << "k_max = " << sys.k_max << "\n";
    os << "v_max = " << format_real(sys.v_max) << "\n";
    os << "fractional_doppler = " << (sys.fractional_doppler ? "true" : "false") << "\n";
    os << "sigma2_phn = " << format_real(sys.sigma2_phn) << "\n";
    os << "phn_unit = " << (sys.phn_unit == PhnUnit::VarianceDeg2 ? "deg2" : "deg") << "\n";
    os << "theta0_mode = " << (sys.theta0_mode == Theta0Mode::Uniform ? "uniform" : "fixed")
       << "\n";
    os << "theta0_fixed_deg = " << format_real(sys.theta0_fixed_deg) << "\n";
    os << "snr_db = " << join_list<Real>(sys.snr_db, format_real) << "\n";
    os << "[run]\n";
    std::string windows;
    for (std::size_t i = 0; i < cfg.windows.size(); ++i) {
        if (i) windows += ",";
        windows += window_name(cfg.windows[i]);
    }
    os << "windows = " << windows << "\n";
    os << "detector = " << (cfg.detector == DetectorKind::Mld ? "mld" : "lmmse") << "\n";
    os << "detector_csi = " << (cfg.detector_csi == DetectorCsi::Full ? "full" : "phn-blind")
       << "\n";
    os << "seed = " << cfg.seed << "\n";
    os << "out_dir = " << cfg.out_dir << "\n";
    os << "threads = " << cfg.threads << "\n";
    os << "target_errors = " << cfg.target_errors << "\n";
    os << "max_trials = " << cfg.max_trials << "\n";
    os << "[bound]\n";
    os << "mode = " << (cfg.bound_mode == BoundMode::Exact ? "exact" : "sampled") << "\n";
    os << "realizations = " << cfg.bound_realizations << "\n";
    os << "samples = " << cfg.bound_samples << "\n";
    os << "[coding]\n";
    os << "enabled = " << (cfg.coding ? "true" : "false") << "\n";
    os << "codeword_len = " << cfg.codeword_len << "\n";
    os << "t_det = " << cfg.t_det << "\n";
    os << "t_ldpc = " << cfg.t_ldpc << "\n";
    os << "sigma2_list = " << join_list<Real>(cfg.sigma2_list, format_real) << "\n";
    os << "[psd]\n";
    os << "oversample = " << cfg.oversample << "\n";
    os << "segment_len = " << cfg.segment_len << "\n";
    os << "overlap = " << format_real(cfg.overlap) << "\n";
    os << "n_avg = " << cfg.n_avg << "\n";
    os << "offsets = " << join_list<Real>(cfg.oobe_offsets, format_real) << "\n";
    return os.str();
}

std::string config_hash(const ExperimentConfig& cfg) {
    // out_dir and threads cannot change any result, so they are left out of
    // the hash; the full dump still records them.
    std::istringstream is(dump_config(cfg));
    std::string line, hashed;
    while (std::getline(is, line)) {
        if (line.rfind("out_dir = ", 0) == 0 || line.rfind("threads = ", 0) == 0) continue;
        hashed += line;
        hashed += '\n';
    }
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : hashed) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace otsm
