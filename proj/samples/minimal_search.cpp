// Smallest end-to-end use of the library: search a seeded synthetic
// landscape with the default bi-objective setup and print the final front.

#include <iostream>

#include "novarch/novarch.hpp"

int main() {
    using namespace novarch;

    SearchConfig cfg;
    cfg.ea.population_size = 20;
    cfg.ea.generations = 30;
    cfg.ea.rng_seed = 1;
    cfg.space = &OperationSpace::s2();
    cfg.oracle = make_synthetic(*cfg.space, 42);
    cfg.mode = SearchMode::multi;

    const SearchResult result = run_search(cfg);

    std::cout << "final front (" << result.pareto_front.size() << " architectures)\n";
    for (const FrontEntry& e : result.pareto_front)
        std::cout << "  " << e.key << "  f_acc=" << format_double(e.f_acc)
                  << "  f_nov=" << format_double(e.f_nov) << "\n";
    std::cout << "best: " << result.best.key << " f_acc=" << format_double(result.best.f_acc)
              << "\n";
    return 0;
}
