from typing import Any, Dict, Tuple

import numpy as np


class ValueModel:
    """
    불변 도메인 값의 기본 클래스

    모든 모델(poset, 사상, 격자, thread 등)이 상속받는 공통 메서드를 제공합니다.
    하위 클래스는 _fields 에 표시할 속성 이름을 나열합니다.

    사용 예시:
        class Thread(ValueModel):
            _fields = ("depth", "entries")
    """

    _fields: Tuple[str, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        """
        객체를 딕셔너리로 변환

        numpy 배열은 list 로 바꿔서 JSON 직렬화나 디버깅에 바로 쓸 수 있게 합니다.
        """
        result = {}
        for name in self._fields:
            value = getattr(self, name)
            if isinstance(value, np.ndarray):
                value = value.tolist()
            elif isinstance(value, ValueModel):
                value = value.to_dict()
            result[name] = value
        return result

    def __repr__(self) -> str:
        class_name = self.__class__.__name__
        if not self._fields:
            return f"<{class_name}()>"
        first = self._fields[0]
        return f"<{class_name}({first}={getattr(self, first)!r})>"
