#include "fixtures.hpp"

namespace sdrecon {

const std::array<double, 32> kQmf32 = {
    0.0019156001361951883,
    -0.0033867395203659658,
    -0.0018910010698264461,
    0.0074075073981044797,
    0.0010313013120121278,
    -0.013387912651487309,
    0.0015922185504782735,
    0.021952123872364008,
    -0.0072703537392042224,
    -0.034402777339282924,
    0.018632648459825572,
    0.054571341003999317,
    -0.043671811668349048,
    -0.099451835746178205,
    0.13224848920431986,
    0.46411120179739518,
    0.46411120179739518,
    0.13224848920431986,
    -0.099451835746178205,
    -0.043671811668349048,
    0.054571341003999317,
    0.018632648459825572,
    -0.034402777339282924,
    -0.0072703537392042224,
    0.021952123872364008,
    0.0015922185504782735,
    -0.013387912651487309,
    0.0010313013120121278,
    0.0074075073981044797,
    -0.0018910010698264461,
    -0.0033867395203659658,
    0.0019156001361951883};

const std::array<double, 127> kEquiripple127 = {
    -0.00064960242333715645,
    0.0019953169519937712,
    0.0035078086155998544,
    0.004905079327320541,
    0.0050347896912617878,
    0.0033360999128659898,
    0.00019124015047657892,
    -0.0030769920134845804,
    -0.0047704849186159162,
    -0.0037558762453857395,
    -0.00026647758173973672,
    0.0039643770580580469,
    0.0064742240963457584,
    0.0054362475379445396,
    0.0008921625995443218,
    -0.0049572092701795599,
    -0.0087390430674238271,
    -0.0077976261965970193,
    -0.0019500550982634647,
    0.0059997995011635587,
    0.011517121361578925,
    0.010856203137942892,
    0.0034890211708126151,
    -0.0070853160918194985,
    -0.014884947738355615,
    -0.014751071978653635,
    -0.0056297581918956707,
    0.0081915039680798586,
    0.018954709257410659,
    0.019683546527547481,
    0.0085544402796007956,
    -0.009284027470420779,
    -0.023891468181047353,
    -0.025947785694227607,
    -0.01251034107325473,
    0.010336561332341872,
    0.029972803325075698,
    0.034019792924223108,
    0.017902271508097228,
    -0.01132580786160009,
    -0.03768623704595158,
    -0.044725227701032252,
    -0.02542919821920548,
    0.012221427132732271,
    0.047940859529871135,
    0.059625009410354889,
    0.036426616104627628,
    -0.012994002830865907,
    -0.062651754952162603,
    -0.08207833961644026,
    -0.053869446186999022,
    0.01362161552409618,
    0.086570866146777961,
    0.12086665860932022,
    0.086021903899166433,
    -0.014083317209424833,
    -0.13540852714531701,
    -0.20828265809475546,
    -0.16762531824864083,
    0.014365478934022185,
    0.30889786173549438,
    0.63530347134312082,
    0.88962972595217538,
    0.98553934247658048,
    0.88962972595217538,
    0.63530347134312082,
    0.30889786173549438,
    0.014365478934022185,
    -0.16762531824864083,
    -0.20828265809475546,
    -0.13540852714531701,
    -0.014083317209424833,
    0.086021903899166433,
    0.12086665860932022,
    0.086570866146777961,
    0.01362161552409618,
    -0.053869446186999022,
    -0.08207833961644026,
    -0.062651754952162603,
    -0.012994002830865907,
    0.036426616104627628,
    0.059625009410354889,
    0.047940859529871135,
    0.012221427132732271,
    -0.02542919821920548,
    -0.044725227701032252,
    -0.03768623704595158,
    -0.01132580786160009,
    0.017902271508097228,
    0.034019792924223108,
    0.029972803325075698,
    0.010336561332341872,
    -0.01251034107325473,
    -0.025947785694227607,
    -0.023891468181047353,
    -0.009284027470420779,
    0.0085544402796007956,
    0.019683546527547481,
    0.018954709257410659,
    0.0081915039680798586,
    -0.0056297581918956707,
    -0.014751071978653635,
    -0.014884947738355615,
    -0.0070853160918194985,
    0.0034890211708126151,
    0.010856203137942892,
    0.011517121361578925,
    0.0059997995011635587,
    -0.0019500550982634647,
    -0.0077976261965970193,
    -0.0087390430674238271,
    -0.0049572092701795599,
    0.0008921625995443218,
    0.0054362475379445396,
    0.0064742240963457584,
    0.0039643770580580469,
    -0.00026647758173973672,
    -0.0037558762453857395,
    -0.0047704849186159162,
    -0.0030769920134845804,
    0.00019124015047657892,
    0.0033360999128659898,
    0.0050347896912617878,
    0.004905079327320541,
    0.0035078086155998544,
    0.0019953169519937712,
    -0.00064960242333715645};

std::vector<double> johnston_interpolator() {
  std::vector<double> out(kQmf32.begin(), kQmf32.end());
  for (double& v : out) v *= 2.0;
  return out;
}

std::vector<double> equiripple_interpolator() {
  return std::vector<double>(kEquiripple127.begin(), kEquiripple127.end());
}

}  // namespace sdrecon
