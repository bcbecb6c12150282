#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdio>

int main(int argc, char** argv) {
  std::printf("acceptance suite: one line per criterion follows\n");
  doctest::Context ctx(argc, argv);
  return ctx.run();
}
