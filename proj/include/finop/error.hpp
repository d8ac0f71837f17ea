#pragma once

#include <stdexcept>
#include <string>

namespace finop {

// Failure kinds raised by the library. Each maps to one precondition or
// validation rule; tests match on the code rather than the message text.
enum class errc {
    non_square,
    dim_mismatch,
    dependent_input,
    not_projection,
    not_hermitian,
    not_a_state,
    not_dominated,
    not_cp,
    not_unital,
    not_same_map,
    not_minimal,
    not_an_action,
    group_mismatch,
    off_circle,
    not_subgroup,
    support_out_of_domain,
    grid_too_small,
    outside_domain,
    index_mismatch,
    bad_level,
    bad_mode_count,
    parse_error,
};

inline const char* to_string(errc c) {
    switch (c) {
        case errc::non_square: return "non_square";
        case errc::dim_mismatch: return "dim_mismatch";
        case errc::dependent_input: return "dependent_input";
        case errc::not_projection: return "not_projection";
        case errc::not_hermitian: return "not_hermitian";
        case errc::not_a_state: return "not_a_state";
        case errc::not_dominated: return "not_dominated";
        case errc::not_cp: return "not_cp";
        case errc::not_unital: return "not_unital";
        case errc::not_same_map: return "not_same_map";
        case errc::not_minimal: return "not_minimal";
        case errc::not_an_action: return "not_an_action";
        case errc::group_mismatch: return "group_mismatch";
        case errc::off_circle: return "off_circle";
        case errc::not_subgroup: return "not_subgroup";
        case errc::support_out_of_domain: return "support_out_of_domain";
        case errc::grid_too_small: return "grid_too_small";
        case errc::outside_domain: return "outside_domain";
        case errc::index_mismatch: return "index_mismatch";
        case errc::bad_level: return "bad_level";
        case errc::bad_mode_count: return "bad_mode_count";
        case errc::parse_error: return "parse_error";
    }
    return "unknown";
}

class error : public std::runtime_error {
  public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

  private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) { throw error(code, what); }

}  // namespace finop
