#include "launcher/lab/reference_tables.hpp"

#include <array>

namespace launcher::lab::reference {

namespace {

const std::array<AccuracyRow, 9> ramp_up_rows{{
    {"0.01", 39, 0.0402, 0.0166, 0.002096, {}},
    {"0.05", 32, 0.0400, 0.0143, 0.001797, {}},
    {"0.10", 38, 0.0436, 0.0174, 0.002383, {}},
    {"0.50", 34, 0.0211, 0.0150, 0.000994, {}},
    {"1.00", 34, 0.0243, 0.0172, 0.001313, {}},
    {"2.00", 33, 0.0243, 0.0134, 0.001023, {}},
    {"3.00", 36, 0.0234, 0.0134, 0.000985, {}},
    {"8.00", 40, 0.0247, 0.0173, 0.001342, {}},
    {"continuous", 40, 0.0231, 0.0150, 0.001089, {}},
}};

const std::array<AccuracyRow, 8> stroke_gain_rows{{
    {"0.05", 35, 0.0197, 0.0143, 0.00088, 8.83},
    {"0.10", 50, 0.0156, 0.0192, 0.00095, 4.21},
    {"0.50", 50, 0.0241, 0.0239, 0.00181, 1.60},
    {"1.00", 49, 0.0213, 0.0223, 0.00149, 1.39},
    {"3.00", 46, 0.0237, 0.0196, 0.00146, 0.81},
    {"5.00", 50, 0.0227, 0.0223, 0.00159, 0.61},
    {"10.00", 50, 0.0199, 0.0215, 0.00134, 0.67},
    {"30.00", 50, 0.0279, 0.0150, 0.00132, 0.62},
}};

const std::array<AccuracyRow, 6> pinching_rows{{
    {"35.3", 51, 0.03194, 0.03062, 0.00307, {}},
    {"35.8", 48, 0.01932, 0.02658, 0.00161, {}},
    {"36.4", 49, 0.01906, 0.02171, 0.00130, {}},
    {"37.0", 49, 0.01965, 0.02480, 0.00153, {}},
    {"37.4", 49, 0.01866, 0.02208, 0.00129, {}},
    {"38.6", 49, 0.02361, 0.02428, 0.00180, {}},
}};

// The jump table prints no area.
const std::array<AccuracyRow, 2> orientation_jump_rows{{
    {"no", 20, 0.0155, 0.0193, 0.0, {}},
    {"yes", 20, 0.0195, 0.0176, 0.0, {}},
}};

const std::array<FigurePoint, 8> ramp_up_points{{
    {0.01, 40.1689226222973, 16.5665564742826, 28.36773954829},
    {0.05, 40.0360561215795, 14.3320032042472, 27.1840296629134},
    {0.1, 43.5996082078906, 17.4283277285046, 30.5139679681976},
    {0.5, 21.1268140636482, 15.0007166933308, 18.0637653784895},
    {1, 24.2869301473277, 17.1740209751143, 20.730475561221},
    {2, 24.3445778226545, 13.4113465678336, 18.8779621952441},
    {3, 23.4409623199056, 13.3503104916539, 18.3956364057798},
    {8, 23.7327250540187, 17.2763155274512, 20.504520290735},
}};

const std::array<FigurePoint, 8> stroke_gain_points{{
    {0.05, 19.6968471252269, 14.2923178990428, 16.9945825121348},
    {0.1, 15.6307345068363, 19.2354820838708, 17.4331082953535},
    {0.5, 24.0627585301564, 23.906328791735, 23.9845436609457},
    {1, 21.2650801017897, 22.2961313151983, 21.780605708494},
    {3, 23.661425842816, 19.6001743191984, 21.6308000810072},
    {5, 22.6517158350676, 22.3218273192108, 22.4867715771392},
    {10, 19.8677397324046, 21.5241350461301, 20.6959373892673},
    {30, 27.9296133873545, 14.9931277190834, 21.461370553219},
}};

const std::array<FigurePoint, 6> pinching_points{{
    {35.3, 16.0566045415551, 27.4695808719725, 21.7630927067638},
    {35.8, 20.2740263366794, 26.4265727361768, 23.3502995364281},
    {36.4, 19.0314113856567, 21.4700468292318, 20.2507291074442},
    {37, 19.6486109356218, 24.8010675187072, 22.2248392271645},
    {37.4, 18.9861585942862, 22.2645586213726, 20.6253586078294},
    {38.6, 23.6136857453632, 24.2818106138511, 23.9477481796071},
}};

const std::array<DatasetGroup, 6> groups{{
    {1, 415, "none-low", "all same", "various"},
    {2, 64, "high", "high speeds", "various"},
    {3, 364, "low-medium", "low speeds", "various"},
    {4, 1103, "low-high", "various", "high"},
    {5, 1385, "low-medium", "various", "medium"},
    {6, 430, "low", "various", "low"},
}};

} // namespace

std::span<const AccuracyRow> ramp_up_table() { return ramp_up_rows; }
std::span<const AccuracyRow> stroke_gain_table() { return stroke_gain_rows; }
std::span<const AccuracyRow> pinching_table() { return pinching_rows; }
std::span<const AccuracyRow> orientation_jump_table() { return orientation_jump_rows; }

std::span<const FigurePoint> ramp_up_figure() { return ramp_up_points; }
std::span<const FigurePoint> stroke_gain_figure() { return stroke_gain_points; }
std::span<const FigurePoint> pinching_figure() { return pinching_points; }

std::span<const DatasetGroup> dataset_groups() { return groups; }

} // namespace launcher::lab::reference
