// Stand-in dependency parser for adapter tests: reads a sentence on
// stdin and writes naive CoNLL-U on stdout. Flags simulate failure
// modes of a real parser process.
//   --fail        write a diagnostic to stderr and exit nonzero
//   --sleep-ms N  sleep before answering (timeout tests)
//   --empty       produce no output at all

#include <chrono>
#include <cstring>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "naive_conllu.hpp"

int main(int argc, char** argv) {
  bool fail = false, empty = false;
  int sleep_ms = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--fail") == 0) fail = true;
    else if (std::strcmp(argv[i], "--empty") == 0) empty = true;
    else if (std::strcmp(argv[i], "--sleep-ms") == 0 && i + 1 < argc)
      sleep_ms = std::atoi(argv[++i]);
  }

  std::ostringstream buf;
  buf << std::cin.rdbuf();
  std::string raw = buf.str();
  while (!raw.empty() && (raw.back() == '\n' || raw.back() == '\r'))
    raw.pop_back();

  if (sleep_ms > 0)
    std::this_thread::sleep_for(std::chrono::milliseconds(sleep_ms));
  if (fail) {
    std::cerr << "stub parser: simulated failure\n";
    return 3;
  }
  if (empty) return 0;

  std::cout << naive_conllu(raw);
  return 0;
}
