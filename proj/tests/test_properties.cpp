#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include "testutil.hpp"
TEST_CASE("placeholder test_properties") { CHECK(true); }
