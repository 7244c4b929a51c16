#include "otsm/reports.hpp"

#include <fstream>
#include <sstream>

namespace otsm {

namespace {

std::string comment_block(const std::string& text) {
    std::istringstream is(text);
    std::string line, out;
    while (std::getline(is, line)) out += "# " + line + "\n";
    return out;
}

}  // namespace

std::string provenance_header(const ExperimentConfig& cfg) {
    std::string out = "# config_hash=" + config_hash(cfg) + "\n";
    out += "# seed=" + std::to_string(cfg.seed) + "\n";
    out += comment_block(dump_config(cfg));
    return out;
}

std::string ber_csv_prefix(const ExperimentConfig& cfg, WindowKind window) {
    std::string out = provenance_header(cfg);
    out += "# window=" + std::string(window_name(window)) + "\n";
    out += "snr_db,ber,errors,bits,trials,ci95\n";
    return out;
}

std::string coded_ber_csv_prefix(const ExperimentConfig& cfg, WindowKind window, Real sigma2) {
    std::string out = provenance_header(cfg);
    out += "# window=" + std::string(window_name(window)) + "\n";
    out += "# sigma2=" + format_real(sigma2) + "\n";
    out += "snr_db,ber,errors,bits,trials,ci95\n";
    return out;
}

std::string ber_csv_row(const BerPoint& pt) {
    std::string out = format_real(pt.snr_db);
    out += "," + format_real(pt.ber);
    out += "," + std::to_string(pt.errors);
    out += "," + std::to_string(pt.bits);
    out += "," + std::to_string(pt.trials);
    out += "," + format_real(pt.ci95);
    out += "\n";
    return out;
}

std::string ber_csv(const ExperimentConfig& cfg, const BerCurve& curve) {
    std::string out = ber_csv_prefix(cfg, curve.window);
    for (const BerPoint& pt : curve.points) out += ber_csv_row(pt);
    return out;
}

std::string bound_csv(const ExperimentConfig& cfg, const BoundReport& report) {
    std::string out = provenance_header(cfg);
    out += "# window=" + std::string(window_name(report.window)) + "\n";
    out += "# mode=" + std::string(report.mode == BoundMode::Exact ? "exact" : "sampled") + "\n";
    out += "snr_db,bound,bound_high_snr,ci95,n_pairs,n_realizations\n";
    for (const BoundPoint& pt : report.points) {
        out += format_real(pt.snr_db);
        out += "," + format_real(pt.bound);
        out += "," + format_real(pt.bound_high_snr);
        out += "," + format_real(pt.ci95);
        out += "," + std::to_string(pt.n_pairs);
        out += "," + std::to_string(pt.n_realizations);
        out += "\n";
    }
    return out;
}

std::string psd_csv(const ExperimentConfig& cfg, WindowKind window, const PsdEstimate& psd) {
    std::string out = provenance_header(cfg);
    out += "# window=" + std::string(window_name(window)) + "\n";
    out += "# estimator: segment_len=" + std::to_string(psd.segment_len) +
           " overlap=" + format_real(psd.overlap) + " n_avg=" + std::to_string(psd.n_avg) +
           " mean_power=" + format_real(psd.mean_power) +
           " integrated_psd=" + format_real(psd.integrated_psd) + "\n";
    out += "normalized_freq,npsd_db\n";
    for (Eigen::Index i = 0; i < psd.freq.size(); ++i)
        out += format_real(psd.freq(i)) + "," + format_real(psd.npsd_db(i)) + "\n";
    return out;
}

std::string oobe_text(const ExperimentConfig& cfg,
                      const std::vector<std::pair<WindowKind, OobeReport>>& reports,
                      const OobeReport& rect_ref) {
    std::string out = provenance_header(cfg);
    out += "# estimator: oversample=" + std::to_string(cfg.oversample) +
           " segment_len=" + std::to_string(cfg.segment_len) +
           " overlap=" + format_real(cfg.overlap) + " n_avg=" + std::to_string(cfg.n_avg) + "\n";
    if (!reports.empty()) {
        const OobeReport& any = reports.front().second;
        out += "# band_center=" + format_real(any.band_center) +
               " band_half_width=" + format_real(any.band_half_width) + "\n";
    }
    out += "window,offset_multiple,npsd_db,delta_vs_rect_db\n";
    for (const auto& [kind, rep] : reports) {
        for (std::size_t i = 0; i < rep.offsets.size(); ++i) {
            const Real delta = rect_ref.offsets.at(i).npsd_db - rep.offsets[i].npsd_db;
            out += std::string(window_name(kind)) + "," + format_real(rep.offsets[i].multiple) +
                   "," + format_real(rep.offsets[i].npsd_db) + "," + format_real(delta) + "\n";
        }
        out += std::string(window_name(kind)) +
               ",max_out_of_band," + format_real(rep.max_out_of_band_db) + "," +
               format_real(rect_ref.max_out_of_band_db - rep.max_out_of_band_db) + "\n";
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << content;
    if (!out.flush()) throw ConfigError("short write to '" + path + "'");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "";
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int resume_point_count(const std::string& path, const std::string& expected_prefix) {
    const std::string content = read_text_file(path);
    if (content.empty() || content.rfind(expected_prefix, 0) != 0) return -1;
    std::string body = content.substr(expected_prefix.size());
    const auto last_end = body.find_last_of('\n');
    body.erase(last_end == std::string::npos ? 0 : last_end + 1);  // drop a torn tail
    int rows = 0;
    for (char c : body) rows += c == '\n';
    if (expected_prefix.size() + body.size() != content.size())
        write_text_file(path, expected_prefix + body);
    return rows;
}

void append_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw ConfigError("cannot append to '" + path + "'");
    out << content;
    if (!out.flush()) throw ConfigError("short write to '" + path + "'");
}

}  // namespace otsm
