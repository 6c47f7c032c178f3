#pragma once

#include <stdexcept>
#include <string>

namespace waitnet {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotFirable : Error { using Error::Error; };
struct NotFullyEnabled : Error { using Error::Error; };
struct ClockOutOfInterval : Error { using Error::Error; };
struct UrgencyViolation : Error { using Error::Error; };
struct Unsatisfiable : Error { using Error::Error; };
struct UnknownVariable : Error { using Error::Error; };
struct BadBoundIndex : Error { using Error::Error; };
struct SemanticError : Error { using Error::Error; };
struct SearchBudgetExceeded : Error { using Error::Error; };
struct RealizationFailed : Error { using Error::Error; };
struct ClassBudgetExceeded : Error { using Error::Error; };

struct BoundExceeded : Error {
    BoundExceeded(std::string place_, int count_)
        : Error("place " + place_ + " holds " + std::to_string(count_) +
                " tokens, over the exploration limit"),
          place(std::move(place_)), count(count_) {}
    std::string place;
    int count;
};

struct SyntaxError : Error {
    SyntaxError(int line_, int col_, const std::string& msg)
        : Error(std::to_string(line_) + ":" + std::to_string(col_) + ": " + msg),
          line(line_), col(col_) {}
    int line;
    int col;
};

}  // namespace waitnet
