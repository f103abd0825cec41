#include "wealthsim/kernels.hpp"

#include <cstdlib>
#include <string>

#include "wealthsim/errors.hpp"
#include "wealthsim/log.hpp"

namespace wealthsim::kernels {

const Table* table_by_name(std::string_view name) {
    if (name == "scalar") return &scalar_table();
    if (name == "avx2") return avx2_table();
    if (name == "auto" || name.empty()) {
        const Table* simd = avx2_table();
        return simd != nullptr ? simd : &scalar_table();
    }
    return nullptr;
}

const Table& active_table() {
    static const Table& chosen = []() -> const Table& {
        const char* env = std::getenv("WEALTHSIM_KERNEL");
        const std::string_view requested = env != nullptr ? env : "auto";
        const Table* table = table_by_name(requested);
        if (table == nullptr) {
            throw ConfigError("WEALTHSIM_KERNEL=" + std::string(requested) +
                              " is unknown or unavailable on this CPU");
        }
        log::debug("kernel table: %s", table->name);
        return *table;
    }();
    return chosen;
}

}  // namespace wealthsim::kernels
