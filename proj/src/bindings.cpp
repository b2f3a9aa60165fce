#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tbrova/oracle.hpp"
#include "tbrova/simulate.hpp"

namespace py = pybind11;

namespace {

tbrova::DecodeResult decode_named(const tbrova::Trellis& trellis,
                                  const tbrova::ReceivedSequence& y, const std::string& decoder,
                                  int wava_iters) {
  const tbrova::DensityTable dens = tbrova::branch_densities(trellis, y);
  return tbrova::decode_word(tbrova::decoder_from_name(decoder), trellis, dens, wava_iters);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "reliability-output decoding of tail-biting convolutional codes";

  py::class_<tbrova::CodeMetadata>(m, "CodeMetadata")
      .def(py::init<>())
      .def_readwrite("d_free", &tbrova::CodeMetadata::d_free)
      .def_readwrite("a_dfree", &tbrova::CodeMetadata::a_dfree)
      .def_readwrite("traceback_depth", &tbrova::CodeMetadata::traceback_depth);

  py::class_<tbrova::CodeSpec>(m, "CodeSpec")
      .def_readonly("k", &tbrova::CodeSpec::k)
      .def_readonly("n", &tbrova::CodeSpec::n)
      .def_readonly("nu", &tbrova::CodeSpec::nu)
      .def_readonly("octal", &tbrova::CodeSpec::octal)
      .def_readonly("meta", &tbrova::CodeSpec::meta)
      .def_property_readonly("num_states", &tbrova::CodeSpec::num_states)
      .def_property_readonly("rate", &tbrova::CodeSpec::rate);

  m.def("build_code", &tbrova::build_code, py::arg("k"), py::arg("n"), py::arg("nu"),
        py::arg("generators_octal"), py::arg("meta") = tbrova::CodeMetadata{});

  py::class_<tbrova::Codeword>(m, "Codeword")
      .def_readonly("bits", &tbrova::Codeword::bits)
      .def_readonly("start_state", &tbrova::Codeword::start_state);

  py::class_<tbrova::Trellis>(m, "Trellis")
      .def(py::init<const tbrova::CodeSpec&, int>(), py::arg("code"), py::arg("length"))
      .def_property_readonly("length", &tbrova::Trellis::length)
      .def_property_readonly("num_states", &tbrova::Trellis::num_states)
      .def("encode", &tbrova::Trellis::encode, py::arg("info"))
      .def("reaches", &tbrova::Trellis::reaches, py::arg("state"), py::arg("ell"),
           py::arg("target"));

  py::class_<tbrova::ChannelParams>(m, "ChannelParams")
      .def_static("awgn", &tbrova::ChannelParams::awgn, py::arg("sigma2"), py::arg("power") = 1.0)
      .def_static("bsc", &tbrova::ChannelParams::bsc, py::arg("crossover"));

  py::class_<tbrova::ReceivedSequence>(m, "ReceivedSequence")
      .def_readonly("samples", &tbrova::ReceivedSequence::samples);

  m.def("transmit", &tbrova::transmit, py::arg("codeword"), py::arg("n"), py::arg("params"),
        py::arg("seed"));
  m.def("snr_from_ebn0", &tbrova::snr_from_ebn0, py::arg("code"), py::arg("ebn0_db"));
  m.def("ebn0_from_snr", &tbrova::ebn0_from_snr, py::arg("code"), py::arg("snr_linear"));
  m.def("sigma2_from_ebn0", &tbrova::sigma2_from_ebn0, py::arg("code"), py::arg("ebn0_db"),
        py::arg("power") = 1.0);
  m.def("bsc_crossover_from_ebn0", &tbrova::bsc_crossover_from_ebn0, py::arg("code"),
        py::arg("ebn0_db"));

  py::class_<tbrova::OpCounters>(m, "OpCounters")
      .def_readonly("additions", &tbrova::OpCounters::additions)
      .def_readonly("multiplications", &tbrova::OpCounters::multiplications)
      .def_readonly("divisions", &tbrova::OpCounters::divisions)
      .def_readonly("segments", &tbrova::OpCounters::segments);

  py::class_<tbrova::DecodeResult>(m, "DecodeResult")
      .def_readonly("info", &tbrova::DecodeResult::info)
      .def_property_readonly("bits",
                             [](const tbrova::DecodeResult& r) { return r.codeword.bits; })
      .def_property_readonly(
          "start_state", [](const tbrova::DecodeResult& r) { return r.codeword.start_state; })
      .def_readonly("word_correct_prob", &tbrova::DecodeResult::word_correct_prob)
      .def_property_readonly(
          "state_posterior",
          [](const tbrova::DecodeResult& r) { return r.state_posterior.probs; })
      .def_readonly("counters", &tbrova::DecodeResult::counters);

  m.def("decode", &decode_named, py::arg("trellis"), py::arg("received"),
        py::arg("decoder") = "tb_rova", py::arg("wava_iters") = 2,
        "decoder is one of tb_rova, approx_tb_rova, tb_sea_rova, wava_prc, tb_bcjr_rova");

  m.def(
      "oracle_word_posterior",
      [](const tbrova::CodeSpec& code, int length, const tbrova::ReceivedSequence& y,
         const std::vector<uint8_t>& bits) {
        const tbrova::OracleResult oracle = tbrova::oracle_posteriors(code, length, y);
        return oracle.posterior[oracle.find(bits)];
      },
      py::arg("code"), py::arg("length"), py::arg("received"), py::arg("bits"),
      "exact P(bits | received) by full-codebook enumeration; small lengths only");
}
