#pragma once

#include <string>

#include "bridgelab/harness.hpp"
#include "bridgelab/limits.hpp"
#include "bridgelab/walks.hpp"

namespace bridgelab::csv {

// 17-significant-digit decimal; round-trips every double exactly.
std::string format_double(double v);

// Row-major, comma-separated, LF line endings, no header. scale_applied is
// not serialized; readers get scale_applied = 1.
std::string distance_matrix_to_string(const walks::DistanceMatrix& dm);
void write_distance_matrix(const walks::DistanceMatrix& dm, const std::string& path);
walks::DistanceMatrix read_distance_matrix(const std::string& path);

// Header "x,y", one atom per row.
std::string subordinator_to_string(const limits::SubordinatorSample& sample);
void write_subordinator(const limits::SubordinatorSample& sample,
                        const std::string& path);

// Header "study,family,alpha,d,n,m,trial,statistic,value"; the alpha field
// is empty for square-integrable families; aggregate rows carry trial = -1.
std::string report_to_string(const harness::ConvergenceReport& report);
void write_report(const harness::ConvergenceReport& report, const std::string& path);

}  // namespace bridgelab::csv
