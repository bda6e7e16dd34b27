"""PDU codec: layout constants, round-trips, framing errors."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pacsbridge.net.errors import ProtocolError
from pacsbridge.net.pdu import (
    Abort,
    AssociateAc,
    AssociateRj,
    AssociateRq,
    ContextResult,
    PDataTf,
    Pdv,
    ProposedContext,
    ReleaseRp,
    ReleaseRq,
    decode_pdu,
    encode_pdu,
)


class TestKnownBytes:
    def test_abort_layout(self):
        assert encode_pdu(Abort(source=0, reason=0)).hex() == "07000000000400000000"

    def test_release_rq_layout(self):
        assert encode_pdu(ReleaseRq()).hex() == "05000000000400000000"

    def test_release_rp_layout(self):
        assert encode_pdu(ReleaseRp()).hex() == "06000000000400000000"

    def test_unknown_pdu_type(self):
        with pytest.raises(ProtocolError, match="unknown PDU type"):
            decode_pdu(bytes.fromhex("ff00000000040000000000"))

    def test_declared_length_exceeds_data(self):
        with pytest.raises(ProtocolError):
            decode_pdu(bytes.fromhex("0700000000ff0000"))

    def test_header_too_short(self):
        with pytest.raises(ProtocolError):
            decode_pdu(b"\x07\x00")


_uid = st.lists(st.integers(0, 99999), min_size=2, max_size=6).map(
    lambda parts: "1." + ".".join(str(p) for p in parts))
_ae = st.text(alphabet="ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_", min_size=1,
              max_size=16)


@st.composite
def _proposed_contexts(draw):
    count = draw(st.integers(1, 5))
    ids = draw(st.lists(st.integers(0, 126), min_size=count, max_size=count,
                        unique=True))
    return tuple(
        ProposedContext(2 * i + 1, draw(_uid),
                        tuple(draw(st.lists(_uid, min_size=1, max_size=3))))
        for i in ids)


@st.composite
def _context_results(draw):
    count = draw(st.integers(1, 5))
    ids = draw(st.lists(st.integers(0, 126), min_size=count, max_size=count,
                        unique=True))
    return tuple(
        ContextResult(2 * i + 1, draw(st.sampled_from([0, 1, 2, 3, 4])),
                      draw(_uid))
        for i in ids)


class TestRoundTrip:
    @settings(max_examples=150, deadline=None)
    @given(called=_ae, calling=_ae, contexts=_proposed_contexts(),
           max_pdu=st.integers(64, 1 << 20), impl=_uid,
           version=st.text(alphabet="ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789",
                           min_size=1, max_size=16))
    def test_associate_rq(self, called, calling, contexts, max_pdu, impl, version):
        pdu = AssociateRq(called, calling, contexts, max_pdu, impl, version)
        assert decode_pdu(encode_pdu(pdu)) == pdu

    @settings(max_examples=150, deadline=None)
    @given(called=_ae, calling=_ae, results=_context_results(),
           max_pdu=st.integers(64, 1 << 20), impl=_uid,
           version=st.text(alphabet="ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789",
                           min_size=1, max_size=16))
    def test_associate_ac(self, called, calling, results, max_pdu, impl, version):
        pdu = AssociateAc(called, calling, results, max_pdu, impl, version)
        assert decode_pdu(encode_pdu(pdu)) == pdu

    @settings(max_examples=100, deadline=None)
    @given(result=st.integers(0, 255), source=st.integers(0, 255),
           reason=st.integers(0, 255))
    def test_associate_rj(self, result, source, reason):
        pdu = AssociateRj(result, source, reason)
        assert decode_pdu(encode_pdu(pdu)) == pdu

    @settings(max_examples=150, deadline=None)
    @given(pdvs=st.lists(
        st.builds(Pdv, context_id=st.integers(1, 255).filter(lambda i: i % 2),
                  data=st.binary(max_size=512), is_command=st.booleans(),
                  is_last=st.booleans()),
        min_size=1, max_size=4).map(tuple))
    def test_p_data(self, pdvs):
        pdu = PDataTf(pdvs)
        assert decode_pdu(encode_pdu(pdu)) == pdu

    @settings(max_examples=50, deadline=None)
    @given(source=st.integers(0, 255), reason=st.integers(0, 255))
    def test_abort(self, source, reason):
        assert decode_pdu(encode_pdu(Abort(source, reason))) == Abort(source, reason)

    def test_release_pdus(self):
        assert decode_pdu(encode_pdu(ReleaseRq())) == ReleaseRq()
        assert decode_pdu(encode_pdu(ReleaseRp())) == ReleaseRp()

    def test_length_field_equals_body_length(self):
        pdu = AssociateRq("A", "B", (ProposedContext(1, "1.2", ("1.3",)),))
        raw = encode_pdu(pdu)
        assert int.from_bytes(raw[2:6], "big") == len(raw) - 6
