#pragma once

#include "metastar/vocab.hpp"
#include "metastar/term.hpp"
#include "metastar/prefix_map.hpp"
#include "metastar/dataset.hpp"
#include "metastar/pattern.hpp"
#include "metastar/format.hpp"
#include "metastar/canonical.hpp"
#include "metastar/parser.hpp"
#include "metastar/serializer.hpp"
#include "metastar/patterns.hpp"
