"""The running mock PACS: ECHO/FIND/MOVE SCP plus a store SCU for moves."""

from __future__ import annotations

import logging
import threading
from typing import Iterator

from ..dicom import DataSet, Tag
from ..net import (
    Handlers,
    MoveProgress,
    MoveResult,
    PresentationContext,
    ScpHandle,
    associate,
    c_store,
    serve,
)
from ..net import messages as m
from .fixture import FaultPlan, Fixture
from .matching import match, resolve_instances

log = logging.getLogger(__name__)

TAG_SOP_CLASS = Tag(0x0008, 0x0016)
TAG_SOP_INSTANCE = Tag(0x0008, 0x0018)


class MockPacs:
    """Handle for a seeded mock station."""

    def __init__(self, fixture: Fixture, ae_title: str, dimse_timeout: float):
        self.fixture = fixture
        self.ae_title = ae_title
        self._dimse_timeout = dimse_timeout
        self._stopping = threading.Event()
        self._store_counter_lock = threading.Lock()
        self._store_counter = 0
        self._scp: ScpHandle | None = None

    # -- administration

    @property
    def host(self) -> str:
        return self._scp.host

    @property
    def port(self) -> int:
        return self._scp.port

    def set_fault_plan(self, plan: FaultPlan | None) -> None:
        self.fixture.fault_plan = plan

    def reset_fault_counter(self) -> None:
        with self._store_counter_lock:
            self._store_counter = 0

    def register_ae(self, ae_title: str, host: str, port: int) -> None:
        self.fixture.ae_registry[ae_title] = (host, port)

    def stop(self) -> None:
        self._stopping.set()
        if self._scp is not None:
            self._scp.stop()

    def __enter__(self) -> "MockPacs":
        return self

    def __exit__(self, *exc) -> None:
        self.stop()

    # -- DIMSE handlers

    def _fault(self) -> FaultPlan:
        return self.fixture.fault_plan or FaultPlan()

    def _on_associate(self, request, peer) -> bool:
        return not self._fault().reject_association

    def _on_echo(self, ctx) -> int:
        return m.STATUS_SUCCESS

    def _on_find(self, ctx, identifier: DataSet):
        if self._fault().withhold_find_response:
            # Stall until shutdown; the client is expected to time out.
            self._stopping.wait(timeout=60)
            return []
        return match(self.fixture.instances, identifier)

    def _on_move(self, ctx, identifier: DataSet,
                 destination_ae: str) -> Iterator[MoveProgress | MoveResult]:
        registry = self.fixture.ae_registry
        if destination_ae not in registry:
            log.info("move to unregistered AE %r", destination_ae)
            yield MoveResult(m.STATUS_MOVE_DESTINATION_UNKNOWN, 0, 0)
            return

        instances = resolve_instances(self.fixture.instances, identifier)
        total = len(instances)
        completed = failed = 0
        host, port = registry[destination_ae]

        assoc = None
        if instances:
            sop_classes = sorted({ds.text(TAG_SOP_CLASS) for ds in instances})
            contexts = [PresentationContext(2 * i + 1, uid,
                                            ("1.2.840.10008.1.2", "1.2.840.10008.1.2.1"))
                        for i, uid in enumerate(sop_classes)]
            try:
                assoc = associate(host, port, called_ae=destination_ae,
                                  calling_ae=self.ae_title, contexts=contexts,
                                  connect_timeout=5,
                                  dimse_timeout=self._dimse_timeout)
            except Exception:
                log.warning("store destination %s (%s:%s) unreachable",
                            destination_ae, host, port)
                yield MoveResult(m.STATUS_UNABLE_TO_PERFORM_SUBOPS, 0, total)
                return

        try:
            for index, instance in enumerate(instances):
                yield MoveProgress(remaining=total - index, completed=completed,
                                   failed=failed)
                with self._store_counter_lock:
                    self._store_counter += 1
                    nth = self._store_counter
                if self._fault().fail_nth_store == nth:
                    failed += 1
                    continue
                try:
                    status = c_store(assoc, instance.text(TAG_SOP_CLASS),
                                     instance.text(TAG_SOP_INSTANCE), instance)
                except Exception:
                    log.exception("store sub-operation failed")
                    failed += 1
                    continue
                if status.is_success:
                    completed += 1
                else:
                    failed += 1
        finally:
            if assoc is not None:
                assoc.release()

        status_code = m.STATUS_SUCCESS if failed == 0 else m.STATUS_SUBOPS_ONE_OR_MORE_FAILURES
        yield MoveResult(status_code, completed, failed)


def seed(fixture: Fixture, *, host: str = "127.0.0.1", port: int = 0,
         ae_title: str = "MOCKPACS", dimse_timeout: float = 30.0) -> MockPacs:
    """Validate the fixture and start the mock station on host:port."""
    fixture.validate()
    mock = MockPacs(fixture, ae_title, dimse_timeout)
    handlers = Handlers(
        on_echo=mock._on_echo,
        on_find=mock._on_find,
        on_move=mock._on_move,
        on_associate=mock._on_associate,
    )
    mock._scp = serve(host, port, ae_title, handlers,
                      dimse_timeout=dimse_timeout)
    log.info("mock PACS %s on %s:%s with %d instances",
             ae_title, mock.host, mock.port, len(fixture.instances))
    return mock
