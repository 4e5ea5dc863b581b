#include "mildrep/parallel.hpp"

#include <cstdlib>
#include <string>

namespace mildrep {

unsigned worker_threads()
{
    if (const char* env = std::getenv("MILDREP_THREADS")) {
        try {
            const long value = std::stol(env);
            if (value > 0)
                return static_cast<unsigned>(value);
        } catch (const std::exception&) {
            // fall through to the hardware default
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

}  // namespace mildrep
