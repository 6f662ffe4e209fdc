#pragma once

#include "hamcompat/conflict.hpp"
#include "hamcompat/directed_ham.hpp"
#include "hamcompat/expander.hpp"
#include "hamcompat/graph.hpp"
#include "hamcompat/harness.hpp"
#include "hamcompat/matching.hpp"
#include "hamcompat/nibble.hpp"
#include "hamcompat/posa.hpp"
#include "hamcompat/properties.hpp"
#include "hamcompat/reduction.hpp"
#include "hamcompat/report.hpp"
#include "hamcompat/rng.hpp"
#include "hamcompat/rotation.hpp"
#include "hamcompat/verify.hpp"
