#include "swreg/paper_example.hpp"

namespace swreg::paper {

SwitchingPlant plant() {
    SwitchingPlant pl;
    pl.sampling_time = 0.1;

    PlantMode m1;
    m1.A = Mat{{0.6, 0, 0, 0, 0.1, 0},
               {1, 1, -0.3, 0, -0.2, 0},
               {0, 0.4, 0, 0, 1, 0},
               {0, 0, 0, 0.9, 0.25, -0.4},
               {0, 0, 0, 0, 0.3, 0},
               {0, 0, 0, 0, -0.2, 0.7}};
    m1.B = Mat{{-2, 1, 0},
               {-1, 0, 0},
               {0, 0, 1},
               {0, 1, 0},
               {3, 0, 0},
               {0.4, 1, 1}};
    m1.C = Mat{{0, 0, 2.8, 0, 0, 0},
               {0, 0, 0, 1, 0, 0}};

    PlantMode m2;
    m2.A = Mat{{0.6, 0, 0, 0, -0.3, 0},
               {1, 1, -0.3, 0, 0, 0},
               {0, 0.4, 0, 0, 0, 0},
               {0, 0, 0, 0.9, 0, -0.4},
               {0, 0, 0, 0, 0.5, 0},
               {0, 0, 0, 0, 0, 0.7}};
    m2.B = Mat{{1, 1, 0},
               {0, 0, 0},
               {0, 0, 1},
               {0, 1, 0},
               {1, 0, 0},
               {0, 1, 1}};
    m2.C = m1.C;

    pl.modes = {std::move(m1), std::move(m2)};
    return pl;
}

Exosystem exosystem() {
    // Two copies of a discrete ramp generator, one per plant output.
    Mat Ag{{1, 1, 0, 0},
           {0, 1, 0, 0},
           {0, 0, 1, 1},
           {0, 0, 0, 1}};
    Mat Eg{{1, 0, 0, 0},
           {0, 0, 1, 0}};
    Exosystem exo;
    exo.modes = {{Ag, Eg}, {Ag, Eg}};
    return exo;
}

Mat lyapunov_Q() {
    return Mat{{6.5135, 0.2046, -0.2647, -0.0873, -0.7930, -0.0446},
               {0.2046, 1.0830, -1.0809, 0.0752, 0.0876, -0.1392},
               {-0.2647, -1.0809, 2.8705, -0.1276, -0.2097, 0.2743},
               {-0.0873, 0.0752, -0.1276, 2.0635, 0.4823, -0.6029},
               {-0.7930, 0.0876, -0.2097, 0.4823, 6.5706, -0.7474},
               {-0.0446, -0.1392, 0.2743, -0.6029, -0.7474, 6.1649}};
}

std::vector<Mat> output_injections() {
    Mat G1{{0.0116, -0.0035},
           {0.0490, -0.0183},
           {0.0469, 0.0082},
           {-0.0057, 0.0525},
           {0.0043, 0.0036},
           {-0.0043, -0.0248},
           {-0.6393, 0.0644},
           {-0.1291, 0.0184},
           {-0.0118, -1.3235},
           {-0.0008, -0.3628}};
    Mat G2{{0.0074, -0.0078},
           {0.0500, -0.0157},
           {0.0346, -0.0016},
           {-0.0084, 0.0500},
           {0.0042, 0.0059},
           {-0.0016, -0.0229},
           {-0.6393, 0.0649},
           {-0.1293, 0.0185},
           {-0.0113, -1.3235},
           {-0.0007, -0.3627}};
    return {G1, G2};
}

Mat vstar_basis() {
    return Mat{{1, 0, 0, 0, 0, 0, 0, 0},
               {0, 1, 0, 0, 0, 0, 0, 0},
               {0, 0, -0.3363, 0, 0, 0, 0, 0},
               {0, 0, 0, 0.7071, 0, 0, 0, 0},
               {0, 0, 0, 0, 1, 0, 0, 0},
               {0, 0, 0, 0, 0, 1, 0, 0},
               {0, 0, -0.9417, 0, 0, 0, 0, 0},
               {0, 0, 0, 0, 0, 0, -1, 0},
               {0, 0, 0, 0.7071, 0, 0, 0, 0},
               {0, 0, 0, 0, 0, 0, 0, 1}};
}

Mat v_basis() {
    return Mat{{0.1009, 0, -0.9196, -0.1875},
               {0.8661, -0.1326, -0.9219, -2.5469},
               {0.3363, 0, 0, 0},
               {0, -0.7071, 0, 0},
               {0, 0, 0, 0},
               {0.1009, 0.1768, -1.1875, 2.3125},
               {0.9417, 0, 0, 0},
               {0, 0, -1, 0},
               {0, -0.7071, 0, 0},
               {0, 0, 0, -1}};
}

std::vector<Mat> friend_feedbacks() {
    Mat F1{{-0.0998, 0.0551, -0.1138, -0.0053, 0.3356, 0.0230, -0.0018, 0.0137, 0.0007, -0.0685},
           {-0.2954, 0.2055, -0.4266, -0.0302, 0.9029, 0.1199, 0.0251, 0.4149, 0.0216, -0.1157},
           {0.1318, -0.1232, 0.2606, -0.0053, -0.5643, 0.0546, -0.0104, -0.0841, -0.0330, -0.6033}};
    Mat F2{{0.1502, -0.1593, 0.3113, 0.0374, 0.3058, -0.1429, 0.0346, 0.1784, -0.0433, 0.0470},
           {-0.0537, 0.1395, -0.2776, -0.0426, -0.0045, 0.1620, 0.0021, 0.2035, 0.0569, 0.1044},
           {0.3953, -0.2748, 0.5710, 0.0130, 0.0096, -0.0227, -0.0019, -0.0949, -0.0421, -0.4456}};
    return {F1, F2};
}

SwitchingSignal signal() {
    return SwitchingSignal::parse("1:0-29,2:30-69,1:70-99");
}

}  // namespace swreg::paper
