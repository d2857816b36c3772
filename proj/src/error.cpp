#include "echonet/error.hpp"
