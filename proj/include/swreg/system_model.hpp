#pragma once

#include <string>
#include <vector>

#include "swreg/types.hpp"

namespace swreg {

struct PlantMode {
    Mat A;  // n x n
    Mat B;  // n x m
    Mat C;  // p x n
};

// Discrete-time linear switching plant: a family of modes sharing state,
// input, and output dimensions. sampling_time is metadata used to label time
// axes in seconds; the dynamics are already discrete.
struct SwitchingPlant {
    std::vector<PlantMode> modes;
    double sampling_time = 0.1;

    int num_modes() const { return static_cast<int>(modes.size()); }
    int state_dim() const { return static_cast<int>(modes.at(0).A.rows()); }
    int input_dim() const { return static_cast<int>(modes.at(0).B.cols()); }
    int output_dim() const { return static_cast<int>(modes.at(0).C.rows()); }

    void validate() const;
};

struct ExoMode {
    Mat Ag;  // q x q
    Mat Eg;  // p x q
};

// Autonomous generator of the reference signals, one record per plant mode.
struct Exosystem {
    std::vector<ExoMode> modes;

    int num_modes() const { return static_cast<int>(modes.size()); }
    int state_dim() const { return static_cast<int>(modes.at(0).Ag.rows()); }
    int output_dim() const { return static_cast<int>(modes.at(0).Eg.rows()); }

    void validate() const;
};

struct ExtendedMode {
    Mat Ae;  // (n+q) x (n+q), block diag(A_i, Ag_i)
    Mat Be;  // (n+q) x m,     [B_i; 0]
    Mat Ce;  // p x (n+q),     [C_i, -Eg_i]  (error = plant output minus reference)
};

struct ExtendedSystem {
    std::vector<ExtendedMode> modes;
    int plant_dim = 0;
    int exo_dim = 0;

    int num_modes() const { return static_cast<int>(modes.size()); }
    int state_dim() const { return plant_dim + exo_dim; }
    int input_dim() const { return static_cast<int>(modes.at(0).Be.cols()); }
    int output_dim() const { return static_cast<int>(modes.at(0).Ce.rows()); }
};

// Piecewise-constant mode schedule given as contiguous step segments starting
// at step 0. Mode labels are 1-based, matching the problem statement; callers
// subtract 1 when indexing mode arrays.
class SwitchingSignal {
  public:
    struct Segment {
        int mode_label;  // 1-based
        int start;       // first step, inclusive
        int end;         // last step, inclusive
    };

    explicit SwitchingSignal(std::vector<Segment> segments);

    // Grammar: comma-separated "mode:start-end", e.g. "1:0-29,2:30-69,1:70-99".
    static SwitchingSignal parse(const std::string& text);

    static SwitchingSignal constant(int mode_label, int horizon);

    int mode_at(int step) const;  // 1-based label
    int last_step() const { return segments_.back().end; }
    const std::vector<Segment>& segments() const { return segments_; }

    // Checks labels against the number of modes and coverage of [0, horizon-1].
    void validate(int num_modes, int horizon) const;

    std::string to_string() const;

  private:
    std::vector<Segment> segments_;
};

// Problem files are JSON with fields `sampling_time`, `modes` (array of
// {A, B, C} row-major matrices) and `exosystem` (array of {Ag, Eg}).
std::pair<SwitchingPlant, Exosystem> load_problem(const std::string& path);
std::pair<SwitchingPlant, Exosystem> parse_problem(const std::string& text);
std::string serialize_problem(const SwitchingPlant& plant, const Exosystem& exo);
void save_problem(const SwitchingPlant& plant, const Exosystem& exo,
                  const std::string& path);

ExtendedSystem build_extended(const SwitchingPlant& plant, const Exosystem& exo);

}  // namespace swreg
