class DetectionCount:
    def __init__(self, block, detections, size):
        self.block = block
        self.detections = detections
        self.size = size


class Error:
    def __init__(self, message):
        self.message = message
