#include "iprob/rng.hpp"

// header-only; this TU exists so the header is compiled on its own
