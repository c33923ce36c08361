#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mixgeo/grid.hpp"

namespace mixgeo {

/// Iteration stopping rule shared by all solvers. Relative change compares
/// ||u_new - u_old||_2 / ||u_new||_2 against epsilon; absolute change uses
/// the per-pixel RMS ||u_new - u_old||_2 / sqrt(N) on the [0,255] scale.
/// MaxIters stops on the iteration budget alone.
struct StoppingRule {
    enum class Kind { MaxIters, RelativeChange, AbsoluteChange };
    Kind kind = Kind::MaxIters;
    double epsilon = 0.0;

    static StoppingRule max_iters() { return {Kind::MaxIters, 0.0}; }
    static StoppingRule relative_change(double eps = 1e-4) {
        return {Kind::RelativeChange, eps};
    }
    static StoppingRule absolute_change(double eps = 1e-1) {
        return {Kind::AbsoluteChange, eps};
    }
};

bool stop_triggered(const StoppingRule& rule, const ImageGrid& u_new, const ImageGrid& u_old);

/// One per-iteration record. Quantities without an oracle (no ground truth,
/// non-SAV solver, ...) stay empty in the CSV, never zero.
struct RunLogRow {
    int iter = 0;
    double tau = 0.0;
    double energy_total = 0.0;
    double energy_regularizer = 0.0;
    double energy_fidelity = 0.0;
    std::optional<double> energy_modified;  // SAV: (gamma/2)(u,Lu) + r^2
    std::optional<double> r;
    std::optional<double> psnr_db;
    std::optional<double> ssim;
    std::optional<double> wall_ms;
};

struct RunLog {
    std::vector<RunLogRow> rows;
};

/// Header + one line per row; '.' decimal separator, LF endings, full
/// round-trip precision.
void write_csv(const RunLog& log, std::ostream& os);
std::string to_csv(const RunLog& log);

}  // namespace mixgeo
