#pragma once
// Generated by tools/gen_erfcx_chebyshev.py; do not edit.

namespace ratbounds::kernels::detail {

inline constexpr double kErfcxMap = 3.0;
inline constexpr int kErfcxTerms = 30;
inline constexpr double kErfcxCheb[kErfcxTerms] = {
    1.1775625741965600463,
    5.3539045396156767694e-3,
    -9.3775503422842090522e-2,
    5.4366525557443220495e-2,
    -1.8976596707845207386e-2,
    4.4534260614627115695e-3,
    -6.3355317105531469398e-4,
    1.7661719523171591851e-5,
    1.2841532864056670734e-5,
    -2.0072285659059914438e-6,
    -1.8075227904148371024e-7,
    7.5498283438250928278e-8,
    1.8856685238386027905e-9,
    -2.6995190497983639975e-9,
    -1.4600791199391049408e-11,
    1.0361607445969489676e-10,
    1.4757159766234730087e-12,
    -4.2773400643969108248e-12,
    -2.0792249285979899778e-13,
    1.8134502003176962422e-13,
    1.9734255745447388335e-14,
    -7.2879437375926731568e-15,
    -1.5169878690228115682e-15,
    2.3514112258781403525e-16,
    1.0006111691821667611e-16,
    -2.0572528169538546196e-18,
    -5.6086082188631829491e-18,
    -5.5468847259944304444e-19,
    2.4432011577263517862e-19,
    6.4461239550935222428e-20,
};

}  // namespace ratbounds::kernels::detail
