#include <cstdio>

int main() {
  std::puts("wplab: CLI under construction");
  return 0;
}
