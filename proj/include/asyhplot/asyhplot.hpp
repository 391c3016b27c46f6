#pragma once

// Everything: ingest, h-plot, archetypoids, comparison methods, reports and the pipeline.

#include "asyhplot/archetypoids.hpp"
#include "asyhplot/comparators/kmedoids.hpp"
#include "asyhplot/comparators/network.hpp"
#include "asyhplot/comparators/unfolding.hpp"
#include "asyhplot/data_ingest.hpp"
#include "asyhplot/hplot.hpp"
#include "asyhplot/io/csv.hpp"
#include "asyhplot/io/tables.hpp"
#include "asyhplot/nnls.hpp"
#include "asyhplot/pipeline.hpp"
#include "asyhplot/report/export.hpp"
#include "asyhplot/report/figures.hpp"
#include "asyhplot/report/svg.hpp"
