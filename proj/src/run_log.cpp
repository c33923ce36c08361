#include "mixgeo/run_log.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace mixgeo {

bool stop_triggered(const StoppingRule& rule, const ImageGrid& u_new, const ImageGrid& u_old) {
    if (rule.kind == StoppingRule::Kind::MaxIters) return false;
    double diff_sq = 0.0;
    double norm_sq = 0.0;
    for (std::size_t k = 0; k < u_new.data.size(); ++k) {
        const double d = u_new.data[k] - u_old.data[k];
        diff_sq += d * d;
        norm_sq += u_new.data[k] * u_new.data[k];
    }
    if (rule.kind == StoppingRule::Kind::RelativeChange) {
        if (norm_sq == 0.0) return diff_sq == 0.0;
        return std::sqrt(diff_sq / norm_sq) < rule.epsilon;
    }
    const double rms = std::sqrt(diff_sq / static_cast<double>(u_new.pixel_count()));
    return rms < rule.epsilon;
}

namespace {

std::string format_value(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_cell(const std::optional<double>& v) {
    return v ? format_value(*v) : std::string();
}

}  // namespace

void write_csv(const RunLog& log, std::ostream& os) {
    os << "iter,tau,energy_total,energy_regularizer,energy_fidelity,"
          "energy_modified,r,psnr_db,ssim,wall_ms\n";
    for (const RunLogRow& row : log.rows) {
        os << row.iter << ',' << format_value(row.tau) << ','
           << format_value(row.energy_total) << ','
           << format_value(row.energy_regularizer) << ','
           << format_value(row.energy_fidelity) << ','
           << format_cell(row.energy_modified) << ','
           << format_cell(row.r) << ','
           << format_cell(row.psnr_db) << ','
           << format_cell(row.ssim) << ','
           << format_cell(row.wall_ms) << '\n';
    }
}

std::string to_csv(const RunLog& log) {
    std::ostringstream os;
    write_csv(log, os);
    return os.str();
}

}  // namespace mixgeo
