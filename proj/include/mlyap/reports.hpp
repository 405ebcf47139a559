#pragma once

#include "mlyap/analysis.hpp"
#include "mlyap/bounds.hpp"
#include "mlyap/csv.hpp"
#include "mlyap/fkmc.hpp"
#include "mlyap/spectral.hpp"

#include <string>
#include <vector>

namespace mlyap {

/// CSV builders for the documented output schemas.  Both the CLI and the
/// reproducibility checks format through these, so identical inputs yield
/// byte-identical files.

CsvTable lambda_mc_table(const std::vector<McLambdaEstimate>& estimates);

CsvTable spectral_table(const std::vector<SpectralResult>& results);

CsvTable eigenfunction_table(const SpectralResult& result);

CsvTable bounds_table(const std::vector<BoundsReport>& rows,
                      const std::vector<double>& spectral_lambda,
                      const std::vector<GrowthReport>& growth);

CsvTable growth_table(const std::vector<GrowthReport>& rows);

CsvTable rate_function_table(const RateFunctionTable& table);

CsvTable asymptotics_table(const AsymptoticReport& report);

}  // namespace mlyap
