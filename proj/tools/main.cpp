#include <cstdio>

int main() {
  std::fprintf(stderr, "qsurge: command-line interface not wired up yet\n");
  return 2;
}
