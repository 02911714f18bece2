// Runs the ten acceptance criteria and prints one line per criterion.
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <string>

#include "condensate/battery.hpp"

int main(int argc, char** argv) {
  using namespace condensate;
  const std::string dir = argc > 1 ? argv[1] : CONDENSATE_FIXTURES;
  unsigned threads = 0;
  if (const char* t = std::getenv("CONDENSATE_THREADS")) threads = static_cast<unsigned>(std::strtoul(t, nullptr, 10));
  try {
    const battery::Fixtures fx = battery::load_fixtures(dir);
    const battery::BatteryResult r = battery::run_battery(fx, "", threads);
    for (const auto& o : r.outcomes)
      std::cout << "[" << (o.pass ? "PASS" : "FAIL") << "] criterion " << std::setw(2) << o.id << "  " << std::left
                << std::setw(22) << o.name << std::right << o.items - o.failed << "/" << o.items << " items  "
                << std::fixed << std::setprecision(2) << o.seconds << " s\n";
    if (!r.pass()) {
      for (const auto& c : r.report["criteria"])
        for (const auto& it : c["items"])
          if (!it["pass"].get<bool>())
            std::cout << "  failed: " << c["name"].get<std::string>() << " / " << it["name"].get<std::string>() << " "
                      << it["detail"].dump() << "\n";
    }
    std::cout << (r.pass() ? "all criteria pass" : "some criteria FAIL") << "\n";
    return r.pass() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cout << "acceptance: " << e.what() << "\n";
    return 2;
  }
}
