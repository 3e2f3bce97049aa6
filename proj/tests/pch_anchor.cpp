// Anchor translation unit for the shared precompiled header.
#include "qth/qth.hpp"
