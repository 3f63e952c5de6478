#pragma once

#include "linkstream/analyze.hpp"
#include "linkstream/density.hpp"
#include "linkstream/duration.hpp"
#include "linkstream/graph.hpp"
#include "linkstream/ingest.hpp"
#include "linkstream/io.hpp"
#include "linkstream/oracle.hpp"
#include "linkstream/partition.hpp"
#include "linkstream/relations.hpp"
#include "linkstream/stats.hpp"
#include "linkstream/stream.hpp"
#include "linkstream/synthetic.hpp"
#include "linkstream/types.hpp"
