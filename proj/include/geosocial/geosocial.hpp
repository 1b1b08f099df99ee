#pragma once

#include "geosocial/content.hpp"
#include "geosocial/corpus.hpp"
#include "geosocial/csv.hpp"
#include "geosocial/dates.hpp"
#include "geosocial/demographics.hpp"
#include "geosocial/error.hpp"
#include "geosocial/gazetteer.hpp"
#include "geosocial/geospatial.hpp"
#include "geosocial/interactions.hpp"
#include "geosocial/pagerank.hpp"
#include "geosocial/pipeline.hpp"
#include "geosocial/synthetic.hpp"
#include "geosocial/temporal.hpp"
#include "geosocial/text.hpp"
#include "geosocial/version.hpp"
