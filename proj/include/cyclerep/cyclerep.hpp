#pragma once

#include "cyclerep/complex.hpp"
#include "cyclerep/edge_opt.hpp"
#include "cyclerep/error.hpp"
#include "cyclerep/io.hpp"
#include "cyclerep/lp.hpp"
#include "cyclerep/metrics.hpp"
#include "cyclerep/persistence.hpp"
#include "cyclerep/rational.hpp"
#include "cyclerep/report.hpp"
#include "cyclerep/sparse_matrix.hpp"
#include "cyclerep/tri_opt.hpp"
