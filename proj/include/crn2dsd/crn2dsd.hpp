#pragma once

#include "analyzer.hpp"
#include "compiler.hpp"
#include "crn.hpp"
#include "dsd.hpp"
#include "export.hpp"
#include "ordering.hpp"
#include "sim.hpp"
