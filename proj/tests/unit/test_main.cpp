#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "hysbm/error.hpp"

int main(int argc, char** argv) {
  hysbm::set_warnings_enabled(false);
  doctest::Context context(argc, argv);
  return context.run();
}
