#include <catch2/catch_amalgamated.hpp>
#include "netrecon/netrecon.hpp"
TEST_CASE("placeholder test_cli") { REQUIRE(true); }
