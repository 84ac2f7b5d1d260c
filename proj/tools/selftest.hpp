#pragma once

#include "qscar/report.hpp"

namespace qscar {

/// Fast invariant battery over N <= 4 systems; appends check lines.
void run_selftest(Report& report);

}  // namespace qscar
