// tests/test_pipeline.cc
#include <doctest.h>
