// Compiles every public header in one translation unit.
#include "simplygen/analysis.hpp"
#include "simplygen/discrete.hpp"
#include "simplygen/error.hpp"
#include "simplygen/exact.hpp"
#include "simplygen/logconv.hpp"
#include "simplygen/metrics.hpp"
#include "simplygen/oracles.hpp"
#include "simplygen/predict.hpp"
#include "simplygen/properties.hpp"
#include "simplygen/rational.hpp"
#include "simplygen/report.hpp"
#include "simplygen/rng.hpp"
#include "simplygen/sampling.hpp"
#include "simplygen/summary.hpp"
#include "simplygen/trees.hpp"
#include "simplygen/verify.hpp"
#include "simplygen/verify_core.hpp"
#include "simplygen/weight_file.hpp"
#include "simplygen/weights.hpp"
