// Classify a hand-built birth-death chain: embedded-chain series verdict,
// detailed-balance measure, and the resulting explosion/recurrence tags.

#include <cstdio>

#include "crnkit/crnkit.hpp"

int main() {
    using namespace crnkit;

    auto birth = [](std::int64_t x) { return double(x) * double(x) * double(x) * double(x); };
    auto death = [](std::int64_t x) {
        double v = double(x) * double(x - 1);
        return v * v;
    };

    auto cls = classify_birth_death(birth, death, 1);

    std::printf("embedded-chain series: %s (%s)\n", to_string(cls.embedded_series.verdict),
                cls.embedded_series.method.c_str());
    if (cls.embedded_series.finite())
        std::printf("  value in [%.9f, %.9f]\n", cls.embedded_series.value->lo,
                    cls.embedded_series.value->hi);

    std::printf("stationary weights: %s\n", to_string(cls.stationary.measure.normalizable));
    if (cls.stationary.measure.normalizable == Normalizable::Yes)
        std::printf("  mass at x=2: %.9f\n", cls.stationary.measure.mass(State{2}));

    std::printf("verdicts:");
    for (Verdict v : cls.report.tags()) std::printf(" %s", to_string(v));
    std::printf("\n");
    for (const auto& ev : cls.report.evidence())
        std::printf("  - %s = %g (%s)\n", ev.criterion.c_str(), ev.value, ev.note.c_str());
    return 0;
}
